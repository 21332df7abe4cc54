//! Extrinsic geometry of an orbit cut out by a subspace `b` of the flat `a`:
//! shape-operator spectra, minimality, austerity, tube spectra, constancy of
//! principal curvatures, and spectra of extended submanifolds.
//!
//! Everything here is exact rational arithmetic except the two Jacobi
//! cross-checks at the bottom, which deliberately run in floating point.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

use crate::error::Error;
use crate::linalg::{
    canonical_rowspace, collinear, in_rowspace, rat, vec_add, vec_is_zero, vec_neg, vec_scale,
    vec_sub, Mat, Rat,
};
use crate::rootsys::RootDatum;
use crate::Result;

/// A subspace `b` of the flat spanned by the dual root vectors, stored with its
/// Gram-orthogonal complement `b⊥` inside that flat.
///
/// The basis is kept in reduced row-echelon form, so two `Subspace` values over
/// the same datum are equal as sets exactly when they are equal as matrices.
#[derive(Clone, Debug)]
pub struct Subspace {
    datum: Arc<RootDatum>,
    basis: Mat,
    complement: Mat,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.datum, &other.datum) || *self.datum == *other.datum)
            && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Subspace {
    /// Span of the given ambient vectors. Every vector must lie in the span of
    /// the root vectors; dependent or zero vectors are fine.
    pub fn span(datum: &Arc<RootDatum>, vectors: &[Vec<Rat>]) -> Result<Self> {
        for v in vectors {
            if v.len() != datum.ambient_dim {
                return Err(Error::WrongVectorLength {
                    expected: datum.ambient_dim,
                    got: v.len(),
                });
            }
            if !datum.in_span(v) {
                return Err(Error::OutsideRootSpan);
            }
        }
        let basis = canonical_rowspace(vectors.to_vec(), datum.ambient_dim);
        let complement = gram_complement(datum, &basis);
        Ok(Subspace {
            datum: Arc::clone(datum),
            basis,
            complement,
        })
    }

    /// The zero subspace.
    pub fn zero(datum: &Arc<RootDatum>) -> Self {
        Self::span(datum, &[]).expect("the empty span never fails")
    }

    /// The whole flat.
    pub fn full(datum: &Arc<RootDatum>) -> Self {
        let rows = datum.span_basis.row_vecs();
        Self::span(datum, &rows).expect("the root span always spans itself")
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    /// RREF basis of `b`; rows are the canonical representative.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// RREF basis of `b⊥`, the Gram-orthogonal complement of `b` inside the flat.
    pub fn complement_basis(&self) -> &Mat {
        &self.complement
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Codimension inside the flat, `dim b⊥`.
    pub fn codim(&self) -> usize {
        self.datum.rank - self.dim()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        v.len() == self.datum.ambient_dim && in_rowspace(&self.basis, v)
    }

    /// Gram-projection of `v` onto `b⊥`. `v` must already lie in the flat.
    pub fn project_normal(&self, v: &[Rat]) -> Vec<Rat> {
        if self.basis.rows() == 0 {
            return v.to_vec();
        }
        let b = &self.basis;
        let gram_b = b.mul(&self.datum.gram).mul(&b.transpose());
        let rhs_vec = b.mul_vec(&self.datum.gram.mul_vec(v));
        let rhs = Mat::from_rows(rhs_vec.iter().map(|x| vec![x.clone()]).collect(), 1);
        let coeffs = gram_b
            .solve_square(&rhs)
            .expect("the Gram form stays invertible on any subspace");
        let mut tangent = vec![Rat::zero(); v.len()];
        for i in 0..b.rows() {
            tangent = vec_add(&tangent, &vec_scale(&coeffs[(i, 0)], b.row(i)));
        }
        vec_sub(v, &tangent)
    }

    fn check_normal(&self, xi: &[Rat]) -> Result<()> {
        if xi.len() != self.datum.ambient_dim {
            return Err(Error::WrongVectorLength {
                expected: self.datum.ambient_dim,
                got: xi.len(),
            });
        }
        if self.codim() == 0 {
            return Err(Error::NoNormalDirections);
        }
        if vec_is_zero(xi) {
            return Err(Error::ZeroNormal);
        }
        if !in_rowspace(&self.complement, xi) {
            return Err(Error::NotNormal);
        }
        Ok(())
    }

    /// The orbit is minimal exactly when the half-sum vector lies in `b`.
    pub fn is_minimal(&self) -> bool {
        self.contains(self.datum.hdelta())
    }

    /// Twice the Gram-projection of the half-sum vector onto `b⊥`. Zero exactly
    /// when the orbit is minimal.
    pub fn mean_curvature_vector(&self) -> Vec<Rat> {
        let doubled = vec_scale(&rat(2), self.datum.hdelta());
        self.project_normal(&doubled)
    }

    /// Shape-operator spectrum of the orbit in the normal direction `xi`:
    /// eigenvalue 0 on the `b` block and `⟨H_λ, ξ⟩` on each root space.
    pub fn focal_spectrum(&self, xi: &[Rat]) -> Result<Spectrum> {
        self.check_normal(xi)?;
        let mut entries = vec![(SpectrumValue::Value(Rat::zero()), self.dim() as u64)];
        for (_, e) in self.datum.positives() {
            entries.push((
                SpectrumValue::Value(self.datum.gram_dot(&e.hvec, xi)),
                u64::from(e.mult),
            ));
        }
        Ok(Spectrum::from_entries(entries))
    }

    /// Direction-independent form of the spectrum: each eigenvalue is recorded
    /// as the projection of its root vector onto `b⊥`, to be paired with any
    /// normal direction later.
    pub fn focal_spectrum_symbolic(&self) -> Spectrum {
        let zero_dir = vec![Rat::zero(); self.datum.ambient_dim];
        let mut entries = vec![(SpectrumValue::Direction(zero_dir), self.dim() as u64)];
        for (_, e) in self.datum.positives() {
            entries.push((
                SpectrumValue::Direction(self.project_normal(&e.hvec)),
                u64::from(e.mult),
            ));
        }
        Spectrum::from_entries(entries)
    }

    /// Decides austerity: the multiset of root-vector projections onto `b⊥`
    /// (with multiplicities) must be invariant under negation. On success the
    /// witness pairs up all multiplicity slots, self-pairing the slots whose
    /// projection vanishes and matching each class against its negative in
    /// index order, which makes the witness the lexicographically first one.
    pub fn is_austere(&self) -> (bool, Option<AustereWitness>) {
        let datum = &self.datum;
        let mut slots = Vec::new();
        for (i, e) in datum.positives() {
            for _ in 0..e.mult {
                slots.push(i);
            }
        }
        let projections: Vec<Vec<Rat>> = (0..datum.pos_count())
            .map(|i| self.project_normal(&datum.positive(i).hvec))
            .collect();
        let mut queues: HashMap<Vec<Rat>, VecDeque<usize>> = HashMap::new();
        for (s, &root) in slots.iter().enumerate() {
            if !vec_is_zero(&projections[root]) {
                queues.entry(projections[root].clone()).or_default().push_back(s);
            }
        }
        let mut paired = vec![false; slots.len()];
        let mut pairs = Vec::new();
        for s in 0..slots.len() {
            if paired[s] {
                continue;
            }
            paired[s] = true;
            let p = &projections[slots[s]];
            if vec_is_zero(p) {
                pairs.push((s, s));
                continue;
            }
            let neg = vec_neg(p);
            let partner = loop {
                match queues.get_mut(&neg).and_then(VecDeque::pop_front) {
                    Some(t) if paired[t] => continue,
                    other => break other,
                }
            };
            match partner {
                Some(t) => {
                    paired[t] = true;
                    pairs.push((s, t));
                }
                None => return (false, None),
            }
        }
        let witness = AustereWitness { slots, pairs };
        debug_assert!(witness.validate(self));
        (true, Some(witness))
    }

    /// Sufficient test for non-austerity certified by one positive root: the
    /// half-sum vector lies in `b` while no sum `H_λ + H_μ` does.
    pub fn non_austere_sufficient(&self, root: usize) -> Result<bool> {
        let datum = &self.datum;
        if root >= datum.pos_count() {
            return Err(Error::RootIndexOutOfRange {
                index: root,
                count: datum.pos_count(),
            });
        }
        if !self.is_minimal() {
            return Ok(false);
        }
        let hroot = &datum.positive(root).hvec;
        for (_, e) in datum.positives() {
            if self.contains(&vec_add(hroot, &e.hvec)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Shape-operator spectrum of the tube of radius `t` around a minimal
    /// orbit, in the normal direction `xi`: the radial block contributes
    /// `-1/t` with multiplicity `dim b⊥ - 1`, the `b` block contributes 0, and
    /// each root space contributes `⟨H_λ, ξ⟩`.
    pub fn tube_spectrum(&self, xi: &[Rat], t: &Rat) -> Result<Spectrum> {
        if !t.is_positive() {
            return Err(Error::NonPositiveRadius { got: t.to_string() });
        }
        if !self.is_minimal() {
            return Err(Error::TubeRequiresMinimal);
        }
        self.check_normal(xi)?;
        let minus_inv_t = -(Rat::one() / t.clone());
        let mut entries = vec![
            (SpectrumValue::Value(minus_inv_t), (self.codim() - 1) as u64),
            (SpectrumValue::Value(Rat::zero()), self.dim() as u64),
        ];
        for (_, e) in self.datum.positives() {
            entries.push((
                SpectrumValue::Value(self.datum.gram_dot(&e.hvec, xi)),
                u64::from(e.mult),
            ));
        }
        Ok(Spectrum::from_entries(entries))
    }

    /// Trace of any tube spectrum around a minimal orbit: `-(dim b⊥ - 1)/t`,
    /// independent of the normal direction.
    pub fn tube_cmc(&self, t: &Rat) -> Result<Rat> {
        if !t.is_positive() {
            return Err(Error::NonPositiveRadius { got: t.to_string() });
        }
        if !self.is_minimal() {
            return Err(Error::TubeRequiresMinimal);
        }
        if self.codim() == 0 {
            return Err(Error::NoNormalDirections);
        }
        Ok(-(rat((self.codim() - 1) as i64) / t.clone()))
    }

    fn first_nonvanishing_projection(&self) -> Option<(usize, Vec<Rat>)> {
        for (i, e) in self.datum.positives() {
            let p = self.project_normal(&e.hvec);
            if !vec_is_zero(&p) {
                return Some((i, p));
            }
        }
        None
    }

    /// Whether the tube principal curvatures stay constant over the unit
    /// sphere of `b⊥`. For `dim b⊥ ≥ 2` this forces every root to vanish on
    /// `b⊥`; otherwise a root with nonvanishing projection yields two normal
    /// directions of equal length on which its eigenvalue differs. Codimension
    /// one is flagged: the normal sphere is two points, so the eigenvalue set
    /// is finite no matter what.
    pub fn has_constant_principal_curvatures(&self) -> Result<CurvatureConstancy> {
        if self.codim() == 0 {
            return Err(Error::NoNormalDirections);
        }
        if self.codim() == 1 {
            return Ok(CurvatureConstancy {
                constant: true,
                codim_one_degenerate: true,
                witness: None,
            });
        }
        match self.first_nonvanishing_projection() {
            None => Ok(CurvatureConstancy {
                constant: true,
                codim_one_degenerate: false,
                witness: None,
            }),
            Some((root, p)) => Ok(CurvatureConstancy {
                constant: false,
                codim_one_degenerate: false,
                witness: Some(InhomogeneityWitness {
                    root,
                    xi2: vec_neg(&p),
                    xi1: p,
                }),
            }),
        }
    }

    /// Whether all shape operators for unit normals are isospectral. Requires
    /// codimension at least two; decided exactly as "every positive root
    /// vanishes on `b⊥`", which fails whenever the roots span the flat.
    pub fn is_cpc(&self) -> Result<(bool, Option<InhomogeneityWitness>)> {
        if self.codim() < 2 {
            return Err(Error::CodimensionTooSmall { codim: self.codim() });
        }
        match self.first_nonvanishing_projection() {
            None => Ok((true, None)),
            Some((root, p)) => Ok((
                false,
                Some(InhomogeneityWitness {
                    root,
                    xi2: vec_neg(&p),
                    xi1: p,
                }),
            )),
        }
    }

    /// Spectrum of the submanifold obtained by sweeping a piece of the normal
    /// section through the orbit: the multiset union of the section's own
    /// spectrum and the orbit's focal spectrum in direction `xi`. The section
    /// spectrum must be fully evaluated and can carry at most `dim b⊥ - 1`
    /// dimensions; its trace is preserved because `⟨H_δ, ξ⟩ = 0` for minimal
    /// orbits.
    pub fn extension_spectrum(&self, section: &Spectrum, xi: &[Rat]) -> Result<ExtensionReport> {
        if section.is_symbolic() {
            return Err(Error::SymbolicSpectrum);
        }
        if !self.is_minimal() {
            return Err(Error::ExtensionRequiresMinimal);
        }
        if self.codim() == 0 {
            return Err(Error::NoNormalDirections);
        }
        let available = (self.codim() - 1) as u64;
        let section_dim = section.total_mult();
        if section_dim > available {
            return Err(Error::SectionTooLarge {
                total: section_dim,
                available,
            });
        }
        let focal = self.focal_spectrum(xi)?;
        let spectrum = section.merge(&focal);
        let section_trace = section.trace()?;
        let normal_term = rat(2) * self.datum.gram_dot(self.datum.hdelta(), xi);
        let total_trace = spectrum.trace()?;
        debug_assert_eq!(
            total_trace,
            section_trace.clone() + normal_term.clone(),
            "trace must split into section and normal parts"
        );
        let zero = SpectrumValue::Value(Rat::zero());
        let has_nonzero_entry = spectrum.entries().iter().any(|(v, _)| *v != zero);
        Ok(ExtensionReport {
            spectrum,
            section_trace,
            normal_term,
            total_trace,
            has_nonzero_entry,
        })
    }
}

fn gram_complement(datum: &RootDatum, basis: &Mat) -> Mat {
    let span = &datum.span_basis;
    let constraints = basis.mul(&datum.gram).mul(&span.transpose());
    let coeffs = constraints.kernel();
    let rows = coeffs.mul(span);
    canonical_rowspace(rows.row_vecs(), datum.ambient_dim)
}

/// One eigenvalue of a spectrum: either an evaluated rational or, in symbolic
/// form, the projection vector whose pairing with a normal direction gives the
/// eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpectrumValue {
    Value(Rat),
    Direction(Vec<Rat>),
}

/// A multiset of eigenvalues, kept sorted with merged multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Spectrum {
    entries: Vec<(SpectrumValue, u64)>,
}

impl Spectrum {
    pub fn from_entries(items: impl IntoIterator<Item = (SpectrumValue, u64)>) -> Self {
        let mut map: BTreeMap<SpectrumValue, u64> = BTreeMap::new();
        for (v, m) in items {
            if m > 0 {
                *map.entry(v).or_insert(0) += m;
            }
        }
        Spectrum {
            entries: map.into_iter().collect(),
        }
    }

    pub fn from_values(items: impl IntoIterator<Item = (Rat, u64)>) -> Self {
        Self::from_entries(items.into_iter().map(|(v, m)| (SpectrumValue::Value(v), m)))
    }

    /// Sorted entries; evaluated values come first in ascending numeric order.
    pub fn entries(&self) -> &[(SpectrumValue, u64)] {
        &self.entries
    }

    pub fn total_mult(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn is_symbolic(&self) -> bool {
        self.entries
            .iter()
            .any(|(v, _)| matches!(v, SpectrumValue::Direction(_)))
    }

    pub fn mult_of_value(&self, x: &Rat) -> u64 {
        self.entries
            .iter()
            .find(|(v, _)| matches!(v, SpectrumValue::Value(y) if y == x))
            .map_or(0, |(_, m)| *m)
    }

    /// Sum of eigenvalues with multiplicity. Errors on symbolic entries.
    pub fn trace(&self) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (v, m) in &self.entries {
            match v {
                SpectrumValue::Value(x) => acc += x * Rat::from_integer(BigInt::from(*m)),
                SpectrumValue::Direction(_) => return Err(Error::SymbolicSpectrum),
            }
        }
        Ok(acc)
    }

    /// Multiset union.
    pub fn merge(&self, other: &Spectrum) -> Spectrum {
        Spectrum::from_entries(
            self.entries
                .iter()
                .chain(other.entries.iter())
                .cloned(),
        )
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for entry in &self.entries {
            seq.serialize_element(&EntryRef(entry))?;
        }
        seq.end()
    }
}

struct EntryRef<'a>(&'a (SpectrumValue, u64));

impl Serialize for EntryRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        match &self.0 .0 {
            SpectrumValue::Value(v) => map.serialize_entry("value", &v.to_string())?,
            SpectrumValue::Direction(p) => {
                let coords: Vec<String> = p.iter().map(ToString::to_string).collect();
                map.serialize_entry("proj", &coords)?;
            }
        }
        map.serialize_entry("mult", &self.0 .1)?;
        map.end()
    }
}

/// Pairing of multiplicity slots certifying austerity. Slot `s` stands for one
/// copy of the positive root `slots[s]`; a pair `(s, s)` marks a root whose
/// projection onto `b⊥` vanishes, and a pair `(s, t)` asserts the projections
/// cancel.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AustereWitness {
    pub slots: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

impl AustereWitness {
    /// Re-checks the defining property from scratch: slots enumerate all
    /// multiplicity copies in root order, every slot is covered exactly once,
    /// and each pair's summed root vectors project to zero.
    pub fn validate(&self, b: &Subspace) -> bool {
        let datum = b.datum();
        let mut expected = Vec::new();
        for (i, e) in datum.positives() {
            for _ in 0..e.mult {
                expected.push(i);
            }
        }
        if self.slots != expected {
            return false;
        }
        let mut seen = vec![false; self.slots.len()];
        for &(s, t) in &self.pairs {
            if s >= self.slots.len() || t >= self.slots.len() {
                return false;
            }
            if seen[s] || (s != t && seen[t]) {
                return false;
            }
            seen[s] = true;
            seen[t] = true;
            let sum = vec_add(
                &datum.positive(self.slots[s]).hvec,
                &datum.positive(self.slots[t]).hvec,
            );
            if !vec_is_zero(&b.project_normal(&sum)) {
                return false;
            }
        }
        seen.iter().all(|&x| x)
    }
}

/// Two normal directions of equal Gram length on which one root's eigenvalue
/// differs, certifying that the tube principal curvatures vary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InhomogeneityWitness {
    pub root: usize,
    pub xi1: Vec<Rat>,
    pub xi2: Vec<Rat>,
}

impl InhomogeneityWitness {
    pub fn eigenvalues(&self, b: &Subspace) -> (Rat, Rat) {
        let datum = b.datum();
        let hvec = &datum.positive(self.root).hvec;
        (datum.gram_dot(hvec, &self.xi1), datum.gram_dot(hvec, &self.xi2))
    }

    pub fn validate(&self, b: &Subspace) -> bool {
        if self.root >= b.datum().pos_count() {
            return false;
        }
        if b.check_normal(&self.xi1).is_err() || b.check_normal(&self.xi2).is_err() {
            return false;
        }
        let (v1, v2) = self.eigenvalues(b);
        let datum = b.datum();
        datum.gram_norm_sq(&self.xi1) == datum.gram_norm_sq(&self.xi2) && v1 != v2
    }
}

/// Outcome of the principal-curvature constancy question.
#[derive(Clone, Debug)]
pub struct CurvatureConstancy {
    pub constant: bool,
    /// True when `dim b⊥ = 1`: the normal sphere is two points and the
    /// eigenvalue set is finite regardless of the roots.
    pub codim_one_degenerate: bool,
    pub witness: Option<InhomogeneityWitness>,
}

/// Spectrum of an extended submanifold together with the trace bookkeeping.
#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub spectrum: Spectrum,
    pub section_trace: Rat,
    /// `2⟨H_δ, ξ⟩`; zero whenever the base orbit is minimal.
    pub normal_term: Rat,
    pub total_trace: Rat,
    pub has_nonzero_entry: bool,
}

/// Whether the given positive root keeps all its sums `H_λ + H_μ` off the
/// line through the half-sum vector, over every positive `μ`.
pub fn root_avoids_hdelta_line(datum: &RootDatum, root: usize) -> bool {
    let hvec = &datum.positive(root).hvec;
    datum
        .positives()
        .all(|(_, em)| !collinear(&vec_add(hvec, &em.hvec), datum.hdelta()))
}

/// First positive root (in the fixed ordering) whose sum with every positive
/// root stays off the line through the half-sum vector. Rank 1 data never have
/// one; every datum of rank at least 3 does.
pub fn find_collinear_witness(datum: &RootDatum) -> Option<usize> {
    (0..datum.pos_count()).find(|&k| root_avoids_hdelta_line(datum, k))
}

/// Result of one float Jacobi-field cross-check.
#[derive(Clone, Debug)]
pub struct JacobiCheck {
    pub closed_form: Rat,
    pub closed_form_f64: f64,
    pub numeric: f64,
    pub abs_error: f64,
}

fn rat_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

const JACOBI_STEP: f64 = 1e-6;

/// Checks the eigenvalue `c` produced by the Jacobi field `J(s) = e^{-cs}`
/// against the central finite difference of `-J'/J` at `t`. Float-only; never
/// feeds back into any decision.
pub fn jacobi_eigenvalue_check(c: &Rat, t: &Rat) -> JacobiCheck {
    let cf = rat_f64(c);
    let tf = rat_f64(t);
    let j = |s: f64| (-cf * s).exp();
    let h = JACOBI_STEP;
    let numeric = -(j(tf + h) - j(tf - h)) / (2.0 * h * j(tf));
    JacobiCheck {
        closed_form: c.clone(),
        closed_form_f64: cf,
        numeric,
        abs_error: (numeric - cf).abs(),
    }
}

/// Same cross-check for the radial family `J(s) = s`, whose eigenvalue at
/// radius `t` is `-1/t`.
pub fn jacobi_radial_check(t: &Rat) -> Result<JacobiCheck> {
    if !t.is_positive() {
        return Err(Error::NonPositiveRadius { got: t.to_string() });
    }
    let tf = rat_f64(t);
    let h = JACOBI_STEP;
    let numeric = -((tf + h) - (tf - h)) / (2.0 * h * tf);
    let closed_form = -(Rat::one() / t.clone());
    let cf = rat_f64(&closed_form);
    Ok(JacobiCheck {
        closed_form,
        closed_form_f64: cf,
        numeric,
        abs_error: (numeric - cf).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;
    use crate::rootsys::{preset, Family, SpaceSpec};
    use proptest::prelude::*;

    fn datum(family: Family, rank: usize) -> Arc<RootDatum> {
        Arc::new(RootDatum::build(&SpaceSpec::single(family, rank)).unwrap())
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn hdelta_line(d: &Arc<RootDatum>) -> Subspace {
        Subspace::span(d, &[d.hdelta().to_vec()]).unwrap()
    }

    /// Positive index of the root with the given integer coordinates.
    fn pos_idx(d: &RootDatum, v: &[i64]) -> usize {
        d.find_positive(&ints(v)).unwrap()
    }

    #[test]
    fn canonical_basis_and_complement() {
        let d = datum(Family::A, 4);
        let v1 = ints(&[1, 0, 0, 0, -1]);
        let v2 = ints(&[0, 1, 0, -1, 0]);
        let b1 = Subspace::span(&d, &[v1.clone(), v2.clone()]).unwrap();
        let sum = vec_add(&v1, &v2);
        let b2 = Subspace::span(&d, &[sum, v2.clone(), v1.clone()]).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(b1.dim(), 2);
        assert_eq!(b1.codim(), 2);
        for i in 0..b1.basis().rows() {
            for j in 0..b1.complement_basis().rows() {
                assert!(d
                    .gram_dot(b1.basis().row(i), b1.complement_basis().row(j))
                    .is_zero());
            }
        }
        // complementing twice recovers the canonical basis
        let again = gram_complement(&d, b1.complement_basis());
        assert_eq!(again, *b1.basis());
    }

    #[test]
    fn degenerate_subspaces() {
        let d = datum(Family::A, 3);
        let zero = Subspace::zero(&d);
        assert_eq!(zero.dim(), 0);
        assert_eq!(zero.codim(), 3);
        assert_eq!(
            *zero.complement_basis(),
            canonical_rowspace(d.span_basis.row_vecs(), d.ambient_dim)
        );
        let full = Subspace::full(&d);
        assert_eq!(full.dim(), 3);
        assert_eq!(full.codim(), 0);
        assert_eq!(full.complement_basis().rows(), 0);
        assert!(full.is_minimal());
        let (austere, w) = full.is_austere();
        assert!(austere);
        assert!(w.unwrap().validate(&full));
    }

    #[test]
    fn span_rejects_bad_vectors() {
        let d = datum(Family::A, 2);
        let err = Subspace::span(&d, &[ints(&[1, 0])]).unwrap_err();
        assert!(matches!(err, Error::WrongVectorLength { expected: 3, got: 2 }));
        let err = Subspace::span(&d, &[ints(&[1, 1, 1])]).unwrap_err();
        assert!(matches!(err, Error::OutsideRootSpan));
    }

    #[test]
    fn focal_spectrum_reference_values() {
        // rank-2 arithmetic fixture: eigenvalues come out as {0, 0, 3, -3}
        let d = datum(Family::A, 2);
        let b = hdelta_line(&d);
        let xi = ints(&[1, -2, 1]);
        let spec = b.focal_spectrum(&xi).unwrap();
        assert_eq!(
            spec,
            Spectrum::from_values([(rat(0), 2), (rat(3), 1), (rat(-3), 1)])
        );
        assert_eq!(spec.total_mult(), 1 + d.total_mult());
        assert_eq!(spec.trace().unwrap(), rat(2) * d.gram_dot(d.hdelta(), &xi));
    }

    #[test]
    fn focal_spectrum_scales_with_direction() {
        let d = datum(Family::B, 3);
        let b = hdelta_line(&d);
        let xi = b.complement_basis().row(0).to_vec();
        let spec1 = b.focal_spectrum(&xi).unwrap();
        let spec3 = b.focal_spectrum(&vec_scale(&rat(3), &xi)).unwrap();
        let scaled = Spectrum::from_entries(spec1.entries().iter().map(|(v, m)| match v {
            SpectrumValue::Value(x) => (SpectrumValue::Value(x * rat(3)), *m),
            other => (other.clone(), *m),
        }));
        assert_eq!(spec3, scaled);
    }

    #[test]
    fn focal_spectrum_rejects_bad_directions() {
        let d = datum(Family::A, 3);
        let b = hdelta_line(&d);
        let zero = vec![Rat::zero(); 4];
        assert!(matches!(b.focal_spectrum(&zero), Err(Error::ZeroNormal)));
        // hdelta itself is tangent, not normal
        assert!(matches!(
            b.focal_spectrum(d.hdelta()),
            Err(Error::NotNormal)
        ));
        assert!(matches!(
            b.focal_spectrum(&ints(&[1, 0])),
            Err(Error::WrongVectorLength { .. })
        ));
        let full = Subspace::full(&d);
        assert!(matches!(
            full.focal_spectrum(&ints(&[1, -1, 0, 0])),
            Err(Error::NoNormalDirections)
        ));
    }

    #[test]
    fn symbolic_focal_spectrum_merges_projections() {
        let d = datum(Family::A, 2);
        let b = hdelta_line(&d);
        let spec = b.focal_spectrum_symbolic();
        // the highest root projects to zero and joins the subspace block
        let p = b.project_normal(&ints(&[1, -1, 0]));
        assert_eq!(
            spec,
            Spectrum::from_entries([
                (SpectrumValue::Direction(vec![Rat::zero(); 3]), 2),
                (SpectrumValue::Direction(p.clone()), 1),
                (SpectrumValue::Direction(vec_neg(&p)), 1),
            ])
        );
        assert!(spec.is_symbolic());
        assert!(spec.trace().is_err());
    }

    #[test]
    fn mean_curvature_fixtures() {
        let d = datum(Family::A, 4);
        let alpha1 = ints(&[1, -1, 0, 0, 0]);
        let b = Subspace::span(&d, &[alpha1]).unwrap();
        assert_eq!(b.mean_curvature_vector(), ints(&[3, 3, 0, -2, -4]));
        assert!(!b.is_minimal());

        let zero = Subspace::zero(&d);
        assert_eq!(
            zero.mean_curvature_vector(),
            vec_scale(&rat(2), d.hdelta())
        );
        let line = hdelta_line(&d);
        assert!(line.mean_curvature_vector().iter().all(Rat::is_zero));
        assert!(line.is_minimal());
    }

    #[test]
    fn minimality_membership() {
        let d = datum(Family::A, 4);
        let with_extra = Subspace::span(
            &d,
            &[d.hdelta().to_vec(), ints(&[1, -1, 0, 0, 0])],
        )
        .unwrap();
        assert!(with_extra.is_minimal());
        let two_simples = Subspace::span(
            &d,
            &[ints(&[1, -1, 0, 0, 0]), ints(&[0, 1, -1, 0, 0])],
        )
        .unwrap();
        assert!(!two_simples.is_minimal());
    }

    #[test]
    fn austere_plane_in_a4() {
        let d = datum(Family::A, 4);
        // span of the highest root vector and the middle root vector
        let b = Subspace::span(
            &d,
            &[ints(&[1, 0, 0, 0, -1]), ints(&[0, 1, 0, -1, 0])],
        )
        .unwrap();
        assert!(b.is_minimal());
        let (austere, witness) = b.is_austere();
        assert!(austere);
        assert!(witness.unwrap().validate(&b));

        // the reference pairing written as root cycles validates as well
        let slots: Vec<usize> = (0..d.pos_count()).collect();
        let pair = |x: &[i64], y: &[i64]| (pos_idx(&d, x), pos_idx(&d, y));
        let self_pair = |x: &[i64]| (pos_idx(&d, x), pos_idx(&d, x));
        let reference = AustereWitness {
            slots,
            pairs: vec![
                pair(&[1, -1, 0, 0, 0], &[0, 1, 0, 0, -1]),
                pair(&[0, 1, -1, 0, 0], &[0, 0, 1, -1, 0]),
                pair(&[0, 0, 0, 1, -1], &[1, 0, 0, -1, 0]),
                pair(&[1, 0, -1, 0, 0], &[0, 0, 1, 0, -1]),
                self_pair(&[1, 0, 0, 0, -1]),
                self_pair(&[0, 1, 0, -1, 0]),
            ],
        };
        assert!(reference.validate(&b));

        // breaking one pair invalidates it
        let mut broken = reference;
        broken.pairs[0] = (pos_idx(&d, &[1, -1, 0, 0, 0]), pos_idx(&d, &[0, 1, -1, 0, 0]));
        broken.pairs[1] = (pos_idx(&d, &[0, 1, 0, 0, -1]), pos_idx(&d, &[0, 0, 1, -1, 0]));
        assert!(!broken.validate(&b));
    }

    #[test]
    fn austere_products_of_rank_one() {
        let d = Arc::new(RootDatum::build(&preset("(rh2)^4").unwrap()).unwrap());
        let v1 = ints(&[1, -1, 1, -1, 0, 0, 0, 0]);
        let v2 = ints(&[0, 0, 0, 0, 1, -1, 1, -1]);
        let b = Subspace::span(&d, &[v1, v2]).unwrap();
        let (austere, witness) = b.is_austere();
        assert!(austere);
        let w = witness.unwrap();
        assert_eq!(w.pairs, vec![(0, 1), (2, 3)]);
        assert!(w.validate(&b));
        assert!(b.is_minimal());
    }

    #[test]
    fn hdelta_line_is_not_austere_in_rank_three() {
        for family in [Family::A, Family::B, Family::C, Family::BC] {
            let d = datum(family, 3);
            let b = hdelta_line(&d);
            let (austere, witness) = b.is_austere();
            assert!(!austere, "{}", d.label());
            assert!(witness.is_none());
        }
    }

    #[test]
    fn collinear_witness_existence() {
        let a1 = datum(Family::A, 1);
        assert_eq!(find_collinear_witness(&a1), None);

        let bc1 = datum(Family::BC, 1);
        assert_eq!(find_collinear_witness(&bc1), None);

        for family in [Family::A, Family::B, Family::C, Family::BC] {
            let d = datum(family, 3);
            let k = find_collinear_witness(&d).unwrap();
            let hk = &d.positive(k).hvec;
            for (_, e) in d.positives() {
                assert!(!collinear(&vec_add(hk, &e.hvec), d.hdelta()));
            }
        }

        // reducible case with a rank >= 2 factor
        let spec = SpaceSpec {
            factors: vec![
                crate::rootsys::FactorSpec::with_mult_one(Family::A, 1),
                crate::rootsys::FactorSpec::with_mult_one(Family::A, 2),
            ],
        };
        let d = Arc::new(RootDatum::build(&spec).unwrap());
        assert!(find_collinear_witness(&d).is_some());
    }

    #[test]
    fn non_austere_sufficient_cases() {
        let d = datum(Family::A, 3);
        let b = hdelta_line(&d);
        let k = find_collinear_witness(&d).unwrap();
        assert!(b.non_austere_sufficient(k).unwrap());

        // the austere plane contains root-vector sums, so the test fails there
        let d4 = datum(Family::A, 4);
        let plane = Subspace::span(
            &d4,
            &[ints(&[1, 0, 0, 0, -1]), ints(&[0, 1, 0, -1, 0])],
        )
        .unwrap();
        let alpha1 = pos_idx(&d4, &[1, -1, 0, 0, 0]);
        assert!(!plane.non_austere_sufficient(alpha1).unwrap());

        // without the half-sum vector the test fails outright
        let off = Subspace::span(&d4, &[ints(&[1, -1, 0, 0, 0])]).unwrap();
        assert!(!off.non_austere_sufficient(0).unwrap());

        assert!(matches!(
            b.non_austere_sufficient(99),
            Err(Error::RootIndexOutOfRange { index: 99, count: 6 })
        ));
    }

    #[test]
    fn tube_spectrum_fixture() {
        let d = datum(Family::A, 3);
        let b = hdelta_line(&d);
        let xi = ints(&[1, -1, -1, 1]);
        let t = ratio(1, 2);
        let spec = b.tube_spectrum(&xi, &t).unwrap();
        // -1/t = -2 merges with the two roots evaluating to -2
        assert_eq!(
            spec,
            Spectrum::from_values([(rat(-2), 3), (rat(0), 3), (rat(2), 2)])
        );
        assert_eq!(spec.total_mult(), (d.rank - b.dim()) as u64 - 1 + b.dim() as u64 + d.total_mult());
        assert_eq!(spec.trace().unwrap(), rat(-2));
        assert_eq!(b.tube_cmc(&t).unwrap(), rat(-2));
    }

    #[test]
    fn tube_spectrum_radial_block_count() {
        let d = datum(Family::A, 4);
        let b = Subspace::span(
            &d,
            &[d.hdelta().to_vec(), ints(&[0, 1, 0, -1, 0])],
        )
        .unwrap();
        assert_eq!(b.codim(), 2);
        let xi = b.complement_basis().row(0).to_vec();
        let t = ratio(3, 7);
        let spec = b.tube_spectrum(&xi, &t).unwrap();
        assert_eq!(spec.trace().unwrap(), -rat(1) / t.clone());
        assert_eq!(spec.trace().unwrap(), b.tube_cmc(&t).unwrap());
        assert_eq!(spec.mult_of_value(&(-rat(1) / t)) >= 1, true);
    }

    #[test]
    fn tube_spectrum_errors() {
        let d = datum(Family::A, 3);
        let b = hdelta_line(&d);
        let xi = ints(&[1, -1, -1, 1]);
        assert!(matches!(
            b.tube_spectrum(&xi, &rat(0)),
            Err(Error::NonPositiveRadius { .. })
        ));
        assert!(matches!(
            b.tube_spectrum(&xi, &rat(-2)),
            Err(Error::NonPositiveRadius { .. })
        ));
        let off = Subspace::span(&d, &[ints(&[1, -1, 0, 0])]).unwrap();
        assert!(matches!(
            off.tube_spectrum(&xi, &rat(1)),
            Err(Error::TubeRequiresMinimal)
        ));
        let full = Subspace::full(&d);
        assert!(matches!(
            full.tube_cmc(&rat(1)),
            Err(Error::NoNormalDirections)
        ));
    }

    #[test]
    fn constancy_and_cpc() {
        let d = datum(Family::A, 4);
        let b = Subspace::span(
            &d,
            &[d.hdelta().to_vec(), ints(&[0, 1, 0, -1, 0])],
        )
        .unwrap();
        let report = b.has_constant_principal_curvatures().unwrap();
        assert!(!report.constant);
        assert!(!report.codim_one_degenerate);
        let w = report.witness.unwrap();
        assert!(w.validate(&b));
        let (v1, v2) = w.eigenvalues(&b);
        assert_ne!(v1, v2);
        assert_eq!(v1, -v2.clone());

        let (cpc, cw) = b.is_cpc().unwrap();
        assert!(!cpc);
        assert!(cw.unwrap().validate(&b));

        // codimension one: finitely many normals, flagged constant
        let a2 = datum(Family::A, 2);
        let line = hdelta_line(&a2);
        let report = line.has_constant_principal_curvatures().unwrap();
        assert!(report.constant);
        assert!(report.codim_one_degenerate);
        assert!(report.witness.is_none());
        assert!(matches!(
            line.is_cpc(),
            Err(Error::CodimensionTooSmall { codim: 1 })
        ));

        let full = Subspace::full(&d);
        assert!(matches!(
            full.has_constant_principal_curvatures(),
            Err(Error::NoNormalDirections)
        ));
    }

    #[test]
    fn cpc_true_branch_needs_degenerate_input() {
        // synthetic datum: every positive root vector is forced onto the first
        // block, so they all vanish on the stale complement directions
        let mut raw = RootDatum::build(&preset("(rh2)^3").unwrap()).unwrap();
        let first = raw.roots[0].hvec.clone();
        raw.roots[1].hvec = first.clone();
        raw.roots[2].hvec = first.clone();
        let d = Arc::new(raw);
        let b = Subspace::span(&d, &[first]).unwrap();
        assert_eq!(b.codim(), 2);
        let (cpc, w) = b.is_cpc().unwrap();
        assert!(cpc);
        assert!(w.is_none());
        let report = b.has_constant_principal_curvatures().unwrap();
        assert!(report.constant);
        assert!(!report.codim_one_degenerate);
    }

    #[test]
    fn extension_spectrum_matches_tube() {
        let d = datum(Family::A, 3);
        let b = hdelta_line(&d);
        let xi = ints(&[1, -1, -1, 1]);
        let r = rat(2);
        // a circle of radius r in the section, inward normal: eigenvalue -1/r
        let section = Spectrum::from_values([(-(rat(1) / r.clone()), 1)]);
        let report = b.extension_spectrum(&section, &xi).unwrap();
        assert_eq!(report.spectrum, b.tube_spectrum(&xi, &r).unwrap());
        assert_eq!(report.section_trace, ratio(-1, 2));
        assert_eq!(report.normal_term, rat(0));
        assert_eq!(report.total_trace, ratio(-1, 2));
        assert!(report.has_nonzero_entry);

        // totally geodesic section: the union is just the focal spectrum
        let geodesic = Spectrum::from_values([(rat(0), 1)]);
        let report = b.extension_spectrum(&geodesic, &xi).unwrap();
        assert_eq!(
            report.spectrum,
            b.focal_spectrum(&xi).unwrap().merge(&geodesic)
        );
        assert!(report.has_nonzero_entry);
        assert_eq!(report.total_trace, rat(0));
    }

    #[test]
    fn extension_spectrum_errors() {
        let d = datum(Family::A, 3);
        let b = hdelta_line(&d);
        let xi = ints(&[1, -1, -1, 1]);
        let too_big = Spectrum::from_values([(rat(1), 2)]);
        assert!(matches!(
            b.extension_spectrum(&too_big, &xi),
            Err(Error::SectionTooLarge { total: 2, available: 1 })
        ));
        let symbolic = Spectrum::from_entries([(SpectrumValue::Direction(ints(&[1, 0, 0, -1])), 1)]);
        assert!(matches!(
            b.extension_spectrum(&symbolic, &xi),
            Err(Error::SymbolicSpectrum)
        ));
        let off = Subspace::span(&d, &[ints(&[1, -1, 0, 0])]).unwrap();
        let section = Spectrum::from_values([(rat(1), 1)]);
        assert!(matches!(
            off.extension_spectrum(&section, &xi),
            Err(Error::ExtensionRequiresMinimal)
        ));
        let empty = Spectrum::default();
        assert!(matches!(
            b.extension_spectrum(&empty, &ints(&[0, 0, 0, 0])),
            Err(Error::ZeroNormal)
        ));
    }

    #[test]
    fn decisions_ignore_factor_scale() {
        let base = SpaceSpec::single(Family::B, 3);
        let mut scaled = base.clone();
        scaled.factors[0].scale = ratio(5, 3);
        let d1 = Arc::new(RootDatum::build(&base).unwrap());
        let d2 = Arc::new(RootDatum::build(&scaled).unwrap());
        assert_eq!(find_collinear_witness(&d1), find_collinear_witness(&d2));
        for vectors in [
            vec![d1.hdelta().to_vec()],
            vec![d1.hdelta().to_vec(), ints(&[0, 1, -1])],
            vec![ints(&[1, 0, 0]), ints(&[0, 1, 0])],
        ] {
            let b1 = Subspace::span(&d1, &vectors).unwrap();
            let b2 = Subspace::span(&d2, &vectors).unwrap();
            assert_eq!(b1.is_minimal(), b2.is_minimal());
            let (a1, w1) = b1.is_austere();
            let (a2, w2) = b2.is_austere();
            assert_eq!(a1, a2);
            assert_eq!(w1.map(|w| w.pairs), w2.map(|w| w.pairs));
            let c1 = b1.has_constant_principal_curvatures().unwrap();
            let c2 = b2.has_constant_principal_curvatures().unwrap();
            assert_eq!(c1.constant, c2.constant);
            assert_eq!(
                c1.witness.map(|w| (w.root, w.xi1, w.xi2)),
                c2.witness.map(|w| (w.root, w.xi1, w.xi2))
            );
        }
    }

    #[test]
    fn jacobi_checks_are_tight() {
        for c in -3..=3 {
            for t in [ratio(1, 4), rat(1), rat(4)] {
                let check = jacobi_eigenvalue_check(&rat(c), &t);
                assert!(
                    check.abs_error < 1e-5,
                    "c={c} t={t}: error {}",
                    check.abs_error
                );
            }
        }
        let zero = jacobi_eigenvalue_check(&rat(0), &rat(1));
        assert!(zero.numeric.abs() < 1e-6);
        let two = jacobi_eigenvalue_check(&rat(2), &rat(1));
        assert!(two.abs_error < 1e-6);

        let radial = jacobi_radial_check(&rat(1)).unwrap();
        assert_eq!(radial.closed_form, rat(-1));
        assert!((radial.numeric + 1.0).abs() < 1e-6);
        assert!(jacobi_radial_check(&rat(0)).is_err());
    }

    #[test]
    fn spectrum_json_shape() {
        let spec = Spectrum::from_values([(rat(-2), 3), (ratio(1, 2), 2), (rat(0), 1)]);
        assert_eq!(
            serde_json::to_string(&spec).unwrap(),
            r#"[{"value":"-2","mult":3},{"value":"0","mult":1},{"value":"1/2","mult":2}]"#
        );
        let symbolic = Spectrum::from_entries([(
            SpectrumValue::Direction(vec![ratio(1, 2), rat(-1)]),
            2,
        )]);
        assert_eq!(
            serde_json::to_string(&symbolic).unwrap(),
            r#"[{"proj":["1/2","-1"],"mult":2}]"#
        );
    }

    #[test]
    fn spectrum_merge_bookkeeping() {
        let a = Spectrum::from_values([(rat(1), 2), (rat(0), 1)]);
        let b = Spectrum::from_values([(rat(1), 1), (rat(-1), 4)]);
        let merged = a.merge(&b);
        assert_eq!(
            merged,
            Spectrum::from_values([(rat(-1), 4), (rat(0), 1), (rat(1), 3)])
        );
        assert_eq!(merged.total_mult(), 8);
        assert_eq!(merged.trace().unwrap(), rat(-1));
        assert_eq!(merged.mult_of_value(&rat(1)), 3);
        assert_eq!(merged.mult_of_value(&rat(7)), 0);
    }

    fn small_coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, n)
    }

    fn combo(rows: &Mat, coeffs: &[i64]) -> Vec<Rat> {
        let mut acc = vec![Rat::zero(); rows.cols()];
        for (i, &c) in coeffs.iter().enumerate().take(rows.rows()) {
            acc = vec_add(&acc, &vec_scale(&rat(c), rows.row(i)));
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn focal_trace_identity(extra in small_coeffs(3), xi_c in small_coeffs(3), tp in 1i64..=9, tq in 1i64..=9) {
            let d = datum(Family::A, 3);
            let v = combo(&d.span_basis, &extra);
            let b = Subspace::span(&d, &[d.hdelta().to_vec(), v]).unwrap();
            let xi = combo(b.complement_basis(), &xi_c);
            prop_assume!(!vec_is_zero(&xi) && b.codim() > 0);
            let spec = b.focal_spectrum(&xi).unwrap();
            prop_assert_eq!(spec.trace().unwrap(), rat(2) * d.gram_dot(d.hdelta(), &xi));
            prop_assert_eq!(spec.total_mult(), b.dim() as u64 + d.total_mult());
            let tube = b.tube_spectrum(&xi, &ratio(tp, tq)).unwrap();
            prop_assert_eq!(tube.trace().unwrap(), b.tube_cmc(&ratio(tp, tq)).unwrap());
        }

        #[test]
        fn austerity_witnesses_validate(c1 in small_coeffs(3), c2 in small_coeffs(3)) {
            let d = datum(Family::B, 3);
            let b = Subspace::span(&d, &[combo(&d.span_basis, &c1), combo(&d.span_basis, &c2)]).unwrap();
            let (austere, witness) = b.is_austere();
            if austere {
                prop_assert!(witness.unwrap().validate(&b));
            } else {
                prop_assert!(witness.is_none());
            }
            let zero_mean = b.mean_curvature_vector().iter().all(Rat::is_zero);
            prop_assert_eq!(zero_mean, b.is_minimal());
        }
    }
}
