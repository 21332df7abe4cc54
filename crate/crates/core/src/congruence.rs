//! The finite group of exact linear isometries of the flat that permute the
//! dual root vectors with their multiplicities, and congruence of subspaces
//! under that group.
//!
//! Such a map fixes the set of indecomposable positive vectors, so it is
//! determined by a bijection of the simple roots; enumeration over those
//! bijections is therefore complete (unit-tested against an exhaustive search
//! over all positive-root bijections on small systems). Because the group is
//! read off the weighted root datum alone, it may over-approximate the
//! symmetries realizable by an ambient isometry of a concrete space; reports
//! should present it as diagram-symmetry congruence.

use crate::error::Error;
use crate::geometry::Subspace;
use crate::linalg::{Mat, Rat};
use crate::rootsys::RootDatum;
use crate::Result;

/// One symmetry: an ambient rational matrix preserving the Gram form, together
/// with the permutations it induces on positive roots and on factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryWitness {
    pub matrix: Mat,
    /// Image of each positive-root index under the matrix.
    pub root_permutation: Vec<usize>,
    /// Image of each irreducible factor.
    pub factor_permutation: Vec<usize>,
}

impl IsometryWitness {
    pub fn is_identity(&self) -> bool {
        self.root_permutation.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn apply_to_vec(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.mul_vec(v)
    }

    pub fn map_subspace(&self, b: &Subspace) -> Subspace {
        let rows: Vec<Vec<Rat>> = b
            .basis()
            .row_vecs()
            .iter()
            .map(|r| self.matrix.mul_vec(r))
            .collect();
        Subspace::span(b.datum(), &rows).expect("isometries keep vectors inside the flat")
    }

    /// Re-checks the defining equations: the matrix preserves the Gram form,
    /// fixes the half-sum vector, and sends each positive root vector to the
    /// one its permutation names, with equal multiplicity.
    pub fn validate(&self, datum: &RootDatum) -> bool {
        let g = &datum.gram;
        if self.matrix.transpose().mul(g).mul(&self.matrix) != *g {
            return false;
        }
        if self.matrix.mul_vec(datum.hdelta()).as_slice() != datum.hdelta() {
            return false;
        }
        if self.root_permutation.len() != datum.pos_count() {
            return false;
        }
        let mut seen = vec![false; datum.pos_count()];
        for (k, e) in datum.positives() {
            let img = self.root_permutation[k];
            if img >= datum.pos_count() || seen[img] {
                return false;
            }
            seen[img] = true;
            let target = datum.positive(img);
            if self.matrix.mul_vec(&e.hvec) != target.hvec || e.mult != target.mult {
                return false;
            }
        }
        true
    }
}

/// All bijections of the given positive roots that preserve multiplicities and
/// every pairwise Gram product. Returned as position maps over `items`.
fn gram_mult_bijections(datum: &RootDatum, items: &[usize]) -> Vec<Vec<usize>> {
    let n = items.len();
    let gram: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    datum.gram_dot(&datum.positive(items[i]).hvec, &datum.positive(items[j]).hvec)
                })
                .collect()
        })
        .collect();
    let mults: Vec<u32> = items.iter().map(|&i| datum.positive(i).mult).collect();

    fn go(
        pos: usize,
        gram: &[Vec<Rat>],
        mults: &[u32],
        used: &mut [bool],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == gram.len() {
            out.push(current.clone());
            return;
        }
        for j in 0..gram.len() {
            if used[j] || mults[j] != mults[pos] || gram[j][j] != gram[pos][pos] {
                continue;
            }
            if !current
                .iter()
                .enumerate()
                .all(|(p, &jp)| gram[j][jp] == gram[pos][p])
            {
                continue;
            }
            used[j] = true;
            current.push(j);
            go(pos + 1, gram, mults, used, current, out);
            current.pop();
            used[j] = false;
        }
    }

    let mut out = Vec::new();
    go(
        0,
        &gram,
        &mults,
        &mut vec![false; n],
        &mut Vec::with_capacity(n),
        &mut out,
    );
    out
}

/// Builds ambient matrices that act as prescribed on a spanning set of the
/// flat and as the identity on its Gram-complement.
struct ExtensionBasis {
    sources: Vec<usize>,
    fixed_rows: Vec<Vec<Rat>>,
    inv_transposed: Mat,
}

impl ExtensionBasis {
    fn new(datum: &RootDatum, sources: &[usize]) -> Self {
        let dim = datum.ambient_dim;
        let fixed = datum.span_basis.mul(&datum.gram).kernel();
        let mut rows: Vec<Vec<Rat>> = sources
            .iter()
            .map(|&i| datum.positive(i).hvec.clone())
            .collect();
        rows.extend(fixed.row_vecs());
        let p = Mat::from_rows(rows, dim);
        let inv_transposed = p
            .transpose()
            .inverse()
            .expect("a spanning set plus the complement of the flat is an ambient basis");
        ExtensionBasis {
            sources: sources.to_vec(),
            fixed_rows: fixed.row_vecs(),
            inv_transposed,
        }
    }

    fn matrix_for(&self, datum: &RootDatum, targets: &[usize]) -> Mat {
        debug_assert_eq!(targets.len(), self.sources.len());
        let mut rows: Vec<Vec<Rat>> = targets
            .iter()
            .map(|&i| datum.positive(i).hvec.clone())
            .collect();
        rows.extend(self.fixed_rows.iter().cloned());
        let q = Mat::from_rows(rows, datum.ambient_dim);
        q.transpose().mul(&self.inv_transposed)
    }
}

/// Permutation of positive roots induced by the matrix, or None when some
/// image is not a positive root vector of the same multiplicity.
fn positive_permutation(datum: &RootDatum, m: &Mat) -> Option<Vec<usize>> {
    let mut perm = Vec::with_capacity(datum.pos_count());
    let mut seen = vec![false; datum.pos_count()];
    for (_, e) in datum.positives() {
        let img = datum.find_positive(&m.mul_vec(&e.hvec))?;
        if seen[img] || datum.positive(img).mult != e.mult {
            return None;
        }
        seen[img] = true;
        perm.push(img);
    }
    Some(perm)
}

fn factor_permutation(datum: &RootDatum, perm: &[usize]) -> Option<Vec<usize>> {
    let nf = datum.spec.factors.len();
    let mut map = vec![None; nf];
    for (k, e) in datum.positives() {
        let target = datum.positive(perm[k]).factor;
        match map[e.factor] {
            None => map[e.factor] = Some(target),
            Some(t) if t == target => {}
            _ => return None,
        }
    }
    let out: Vec<usize> = map.into_iter().map(|x| x.expect("every factor has roots")).collect();
    let mut seen = vec![false; nf];
    for &f in &out {
        if seen[f] {
            return None;
        }
        seen[f] = true;
    }
    Some(out)
}

/// The full finite symmetry group of the datum, identity first, then sorted by
/// the induced positive-root permutation.
pub fn automorphism_group(datum: &RootDatum) -> Vec<IsometryWitness> {
    let simples = datum.simple_indices.clone();
    let extension = ExtensionBasis::new(datum, &simples);
    let mut out = Vec::new();
    for assignment in gram_mult_bijections(datum, &simples) {
        let targets: Vec<usize> = assignment.iter().map(|&j| simples[j]).collect();
        let matrix = extension.matrix_for(datum, &targets);
        let Some(root_permutation) = positive_permutation(datum, &matrix) else {
            continue;
        };
        let Some(factor_perm) = factor_permutation(datum, &root_permutation) else {
            continue;
        };
        let witness = IsometryWitness {
            matrix,
            root_permutation,
            factor_permutation: factor_perm,
        };
        debug_assert!(witness.validate(datum));
        out.push(witness);
    }
    out.sort_by(|a, b| a.root_permutation.cmp(&b.root_permutation));
    debug_assert!(out.first().is_some_and(IsometryWitness::is_identity));
    out
}

/// First group element carrying `b1` onto `b2`, if any. Identity-first
/// ordering makes `are_congruent(b, b)` return the identity witness.
pub fn are_congruent(b1: &Subspace, b2: &Subspace) -> Result<Option<IsometryWitness>> {
    if **b1.datum() != **b2.datum() {
        return Err(Error::DatumMismatch);
    }
    for witness in automorphism_group(b1.datum()) {
        if witness.map_subspace(b1) == *b2 {
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClass {
    /// Indices into the input list, ascending.
    pub members: Vec<usize>,
    /// Member whose RREF basis is lexicographically least.
    pub representative: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub classes: Vec<OrbitClass>,
}

impl OrbitPartition {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

/// Partition of the inputs into congruence classes. The group is enumerated
/// once and each class is the orbit of its first member.
pub fn orbit_partition(subspaces: &[Subspace]) -> Result<OrbitPartition> {
    let Some(first) = subspaces.first() else {
        return Ok(OrbitPartition { classes: Vec::new() });
    };
    for b in &subspaces[1..] {
        if **b.datum() != **first.datum() {
            return Err(Error::DatumMismatch);
        }
    }
    let group = automorphism_group(first.datum());
    let mut assigned = vec![false; subspaces.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..subspaces.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut members = vec![i];
        let orbit: Vec<Subspace> = group.iter().map(|w| w.map_subspace(&subspaces[i])).collect();
        for j in (i + 1)..subspaces.len() {
            if !assigned[j] && orbit.iter().any(|img| *img == subspaces[j]) {
                assigned[j] = true;
                members.push(j);
            }
        }
        classes.push(members);
    }
    let classes = classes
        .into_iter()
        .map(|members| {
            let representative = *members
                .iter()
                .min_by(|&&x, &&y| {
                    subspaces[x]
                        .basis()
                        .row_vecs()
                        .cmp(&subspaces[y].basis().row_vecs())
                })
                .expect("classes are never empty");
            OrbitClass {
                members,
                representative,
            }
        })
        .collect();
    Ok(OrbitPartition { classes })
}
