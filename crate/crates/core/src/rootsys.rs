//! Restricted root systems with multiplicities, realized exactly over Q.
//!
//! Each irreducible family gets a fixed rational realization in its own
//! coordinate block; factors are concatenated orthogonally. Positivity is
//! decided once and for all by a fixed generic functional (powers of two on
//! coordinates), so every datum built from the same spec is identical.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{
    canonical_rowspace, dot, in_rowspace, rat, ratio, vec_neg, vec_scale, Mat, Rat,
};
use crate::Result;

pub mod serde_rat {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        crate::linalg::parse_rat(&s).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl Family {
    pub fn admits_rank(self, rank: usize) -> bool {
        match self {
            Family::A | Family::BC => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E6 => rank == 6,
            Family::E7 => rank == 7,
            Family::E8 => rank == 8,
            Family::F4 => rank == 4,
            Family::G2 => rank == 2,
        }
    }

    /// Root-length orbit names, in the order multiplicities are reported.
    pub fn orbit_classes(self, rank: usize) -> &'static [&'static str] {
        match self {
            Family::A | Family::D | Family::E6 | Family::E7 | Family::E8 => &["all"],
            Family::B | Family::C | Family::F4 | Family::G2 => &["short", "long"],
            Family::BC => {
                if rank == 1 {
                    &["short", "long"]
                } else {
                    &["short", "medium", "long"]
                }
            }
        }
    }

    fn ambient(self, rank: usize) -> usize {
        match self {
            Family::A => rank + 1,
            Family::B | Family::C | Family::D | Family::BC => rank,
            Family::G2 => 3,
            Family::F4 => 4,
            Family::E6 | Family::E7 | Family::E8 => 8,
        }
    }
}

fn default_scale() -> Rat {
    Rat::one()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub family: Family,
    pub rank: usize,
    pub multiplicities: BTreeMap<String, u32>,
    #[serde(default = "default_scale", with = "serde_rat")]
    pub scale: Rat,
}

impl FactorSpec {
    pub fn with_mult_one(family: Family, rank: usize) -> Self {
        let mut multiplicities = BTreeMap::new();
        multiplicities.insert("all".to_string(), 1);
        FactorSpec { family, rank, multiplicities, scale: Rat::one() }
    }

    /// "B3", "BC2{short=2,...}"; fixed-rank family names already carry the
    /// rank digit.
    pub fn name(&self) -> String {
        match self.family {
            Family::E6 | Family::E7 | Family::E8 | Family::F4 | Family::G2 => {
                self.family.to_string()
            }
            _ => format!("{}{}", self.family, self.rank),
        }
    }

    pub fn label(&self) -> String {
        let mut s = self.name();
        let uniform_one =
            self.multiplicities.len() == 1 && self.multiplicities.values().all(|&m| m == 1);
        if !uniform_one {
            let parts: Vec<String> =
                self.multiplicities.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&format!("{{{}}}", parts.join(",")));
        }
        if !self.scale.is_one() {
            s.push_str(&format!("(scale {})", self.scale));
        }
        s
    }

    fn resolved_mults(&self) -> Result<BTreeMap<&'static str, u32>> {
        let classes = self.family.orbit_classes(self.rank);
        let label = self.name();
        for (k, &v) in &self.multiplicities {
            if v == 0 {
                return Err(Error::ZeroMultiplicity { factor: label, orbit: k.clone() });
            }
            if k != "all" && !classes.contains(&k.as_str()) {
                return Err(Error::UnknownOrbit { factor: label, key: k.clone() });
            }
        }
        if let Some(&m) = self.multiplicities.get("all") {
            if self.multiplicities.len() != 1 {
                let key = self
                    .multiplicities
                    .keys()
                    .find(|k| k.as_str() != "all")
                    .expect("mixed keys")
                    .clone();
                return Err(Error::UnknownOrbit { factor: label, key });
            }
            return Ok(classes.iter().map(|&c| (c, m)).collect());
        }
        let mut out = BTreeMap::new();
        for &c in classes {
            match self.multiplicities.get(c) {
                Some(&m) => {
                    out.insert(c, m);
                }
                None => return Err(Error::MissingOrbit { factor: label, orbit: c }),
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub factors: Vec<FactorSpec>,
}

impl SpaceSpec {
    pub fn single(family: Family, rank: usize) -> Self {
        SpaceSpec { factors: vec![FactorSpec::with_mult_one(family, rank)] }
    }

    pub fn label(&self) -> String {
        self.factors.iter().map(FactorSpec::label).collect::<Vec<_>>().join("+")
    }
}

/// Named shortcuts: `split:<family><rank>` for split real forms (all
/// multiplicities 1), `sl<n>/so<n>`, and `(rh2)^<k>` products.
pub fn preset(name: &str) -> Option<SpaceSpec> {
    let n = name.trim().to_ascii_lowercase().replace(' ', "");
    if let Some(rest) = n.strip_prefix("split:") {
        let (family, rank) = parse_family_rank(rest)?;
        return Some(SpaceSpec::single(family, rank));
    }
    if let Some(rest) = n.strip_prefix("sl") {
        let (num, tail) = split_leading_number(rest)?;
        if tail == format!("/so{num}") && num >= 2 {
            return Some(SpaceSpec::single(Family::A, num - 1));
        }
        return None;
    }
    let rh = n.strip_prefix("(rh2)^").or_else(|| n.strip_prefix("rh2^"))?;
    let k: usize = rh.parse().ok()?;
    if k == 0 {
        return None;
    }
    Some(SpaceSpec {
        factors: (0..k).map(|_| FactorSpec::with_mult_one(Family::A, 1)).collect(),
    })
}

fn split_leading_number(s: &str) -> Option<(usize, &str)> {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if end == 0 {
        return None;
    }
    Some((s[..end].parse().ok()?, &s[end..]))
}

fn parse_family_rank(s: &str) -> Option<(Family, usize)> {
    let (family, rest) = if let Some(r) = s.strip_prefix("bc") {
        (Family::BC, r)
    } else if let Some(r) = s.strip_prefix('a') {
        (Family::A, r)
    } else if let Some(r) = s.strip_prefix('b') {
        (Family::B, r)
    } else if let Some(r) = s.strip_prefix('c') {
        (Family::C, r)
    } else if let Some(r) = s.strip_prefix('d') {
        (Family::D, r)
    } else if let Some(r) = s.strip_prefix('e') {
        (Family::E6, r) // fixed up below from the rank digit
    } else if let Some(r) = s.strip_prefix('f') {
        (Family::F4, r)
    } else if let Some(r) = s.strip_prefix('g') {
        (Family::G2, r)
    } else {
        return None;
    };
    let rank: usize = rest.parse().ok()?;
    let family = match (family, rank) {
        (Family::E6, 6) => Family::E6,
        (Family::E6, 7) => Family::E7,
        (Family::E6, 8) => Family::E8,
        (Family::E6, _) => return None,
        (f, _) => f,
    };
    family.admits_rank(rank).then_some((family, rank))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEntry {
    /// The vector H_lambda in ambient coordinates; the root acts as
    /// H -> <H_lambda, H> under the datum's Gram form.
    pub hvec: Vec<Rat>,
    pub mult: u32,
    pub positive: bool,
    pub simple: bool,
    pub factor: usize,
    pub class: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootDatum {
    pub spec: SpaceSpec,
    pub ambient_dim: usize,
    pub rank: usize,
    /// Inner product on ambient coordinates: block diagonal, factor f's
    /// block is scale_f times the identity.
    pub gram: Mat,
    /// Canonical (RREF) basis of the span of all roots.
    pub span_basis: Mat,
    /// Positive roots first (sorted by factor, then by the positivity
    /// functional, then lexicographically), then their negatives in the
    /// same order.
    pub roots: Vec<RootEntry>,
    pub hdelta: Vec<Rat>,
    /// Indices into the positive block, grouped by factor, each factor's
    /// simples in lexicographically decreasing order.
    pub simple_indices: Vec<usize>,
    /// Ambient (offset, length) of each factor's coordinate block.
    pub factor_blocks: Vec<(usize, usize)>,
    pos_lookup: HashMap<Vec<Rat>, usize>,
}

/// 2^(d-1-i) coefficients; nonzero on every realized root, which makes the
/// sign a well-defined positivity decision (but it is not injective).
fn chi(v: &[Rat]) -> Rat {
    let d = v.len();
    let mut acc = Rat::zero();
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() {
            acc += x * Rat::from_integer(BigInt::one() << (d - 1 - i));
        }
    }
    acc
}

fn unit(i: usize, d: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); d];
    v[i] = Rat::one();
    v
}

fn family_roots(family: Family, rank: usize) -> Vec<(Vec<Rat>, &'static str)> {
    let d = family.ambient(rank);
    let mut out: Vec<(Vec<Rat>, &'static str)> = Vec::new();
    let push_pm = |v: Vec<Rat>, class: &'static str, out: &mut Vec<(Vec<Rat>, &'static str)>| {
        out.push((vec_neg(&v), class));
        out.push((v, class));
    };
    match family {
        Family::A => {
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        let mut v = vec![Rat::zero(); d];
                        v[i] = Rat::one();
                        v[j] = -Rat::one();
                        out.push((v, "all"));
                    }
                }
            }
        }
        Family::B | Family::C | Family::D | Family::BC => {
            let pair_class = match family {
                Family::B => "long",
                Family::C => "short",
                Family::D => "all",
                Family::BC => "medium",
                _ => unreachable!(),
            };
            for i in 0..d {
                for j in (i + 1)..d {
                    for sj in [1i64, -1] {
                        let mut v = vec![Rat::zero(); d];
                        v[i] = Rat::one();
                        v[j] = rat(sj);
                        push_pm(v, pair_class, &mut out);
                    }
                }
            }
            if matches!(family, Family::B | Family::BC) {
                for i in 0..d {
                    push_pm(unit(i, d), "short", &mut out);
                }
            }
            if matches!(family, Family::C | Family::BC) {
                for i in 0..d {
                    push_pm(vec_scale(&rat(2), &unit(i, d)), "long", &mut out);
                }
            }
        }
        Family::G2 => {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        let mut v = vec![Rat::zero(); 3];
                        v[i] = Rat::one();
                        v[j] = -Rat::one();
                        out.push((v, "short"));
                    }
                }
            }
            for i in 0..3 {
                let mut v = vec![-Rat::one(); 3];
                v[i] = rat(2);
                push_pm(v, "long", &mut out);
            }
        }
        Family::F4 => {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    for sj in [1i64, -1] {
                        let mut v = vec![Rat::zero(); 4];
                        v[i] = Rat::one();
                        v[j] = rat(sj);
                        push_pm(v, "long", &mut out);
                    }
                }
            }
            for i in 0..4 {
                push_pm(unit(i, 4), "short", &mut out);
            }
            for mask in 0..16u32 {
                let v: Vec<Rat> = (0..4)
                    .map(|i| if mask & (1 << i) != 0 { ratio(-1, 2) } else { ratio(1, 2) })
                    .collect();
                out.push((v, "short"));
            }
        }
        Family::E6 | Family::E7 | Family::E8 => {
            let all = e8_roots();
            match family {
                Family::E8 => out.extend(all.into_iter().map(|v| (v, "all"))),
                _ => {
                    let keep = if family == Family::E7 { 7 } else { 6 };
                    let span =
                        canonical_rowspace(e_series_simples().into_iter().take(keep).collect(), 8);
                    out.extend(
                        all.into_iter().filter(|v| in_rowspace(&span, v)).map(|v| (v, "all")),
                    );
                }
            }
        }
    }
    out
}

/// The 240 roots of E8, scaled by 2 so all coordinates are integers:
/// two entries +-2, or all entries +-1 with an even number of minus signs.
fn e8_roots() -> Vec<Vec<Rat>> {
    let mut out = Vec::with_capacity(240);
    for i in 0..8 {
        for j in (i + 1)..8 {
            for (si, sj) in [(2i64, 2i64), (2, -2), (-2, 2), (-2, -2)] {
                let mut v = vec![Rat::zero(); 8];
                v[i] = rat(si);
                v[j] = rat(sj);
                out.push(v);
            }
        }
    }
    for mask in 0..256u32 {
        if mask.count_ones() % 2 == 0 {
            out.push(
                (0..8).map(|i| if mask & (1 << i) != 0 { rat(-1) } else { rat(1) }).collect(),
            );
        }
    }
    out
}

/// Simple roots of E8 (scaled by 2); the first 7 span E7, the first 6
/// span E6 inside the same eight coordinates.
fn e_series_simples() -> Vec<Vec<Rat>> {
    let mut rows = vec![vec![
        rat(1),
        rat(-1),
        rat(-1),
        rat(-1),
        rat(-1),
        rat(-1),
        rat(-1),
        rat(1),
    ]];
    let mut a2 = vec![Rat::zero(); 8];
    a2[0] = rat(2);
    a2[1] = rat(2);
    rows.push(a2);
    for k in 0..6 {
        let mut v = vec![Rat::zero(); 8];
        v[k] = rat(-2);
        v[k + 1] = rat(2);
        rows.push(v);
    }
    rows
}

impl RootDatum {
    pub fn build(spec: &SpaceSpec) -> Result<RootDatum> {
        if spec.factors.is_empty() {
            return Err(Error::EmptySpec);
        }
        let mut factor_blocks = Vec::new();
        let mut offset = 0usize;
        let mut rank = 0usize;
        struct Gen {
            hvec: Vec<Rat>,
            mult: u32,
            factor: usize,
            class: &'static str,
        }
        let mut gen: Vec<Gen> = Vec::new();
        let mut scales = Vec::new();
        for (fi, f) in spec.factors.iter().enumerate() {
            if !f.family.admits_rank(f.rank) {
                return Err(Error::InvalidRank { family: f.family, rank: f.rank });
            }
            if !f.scale.is_positive() {
                return Err(Error::NonPositiveScale {
                    factor: f.label(),
                    got: f.scale.to_string(),
                });
            }
            let mults = f.resolved_mults()?;
            let d = f.family.ambient(f.rank);
            for (local, class) in family_roots(f.family, f.rank) {
                let mut hvec = vec![Rat::zero(); offset];
                hvec.extend(local);
                gen.push(Gen { hvec, mult: mults[class], factor: fi, class });
            }
            factor_blocks.push((offset, d));
            offset += d;
            rank += f.rank;
            scales.push(f.scale.clone());
        }
        let ambient_dim = offset;
        for g in &mut gen {
            g.hvec.resize(ambient_dim, Rat::zero());
        }

        let mut positives: Vec<Gen> = Vec::new();
        for g in gen {
            let c = chi(&g.hvec);
            if c.is_zero() {
                return Err(Error::Internal(format!(
                    "positivity functional vanished on a root of factor {}",
                    g.factor
                )));
            }
            if c.is_positive() {
                positives.push(g);
            }
        }
        positives.sort_by(|a, b| {
            (a.factor, chi(&a.hvec), &a.hvec).cmp(&(b.factor, chi(&b.hvec), &b.hvec))
        });

        let pos_set: HashSet<Vec<Rat>> = positives.iter().map(|g| g.hvec.clone()).collect();
        let is_simple: Vec<bool> = positives
            .iter()
            .map(|g| {
                !positives.iter().any(|h| {
                    h.factor == g.factor
                        && h.hvec != g.hvec
                        && pos_set.contains(&crate::linalg::vec_sub(&g.hvec, &h.hvec))
                })
            })
            .collect();

        let mut simple_indices: Vec<usize> =
            (0..positives.len()).filter(|&i| is_simple[i]).collect();
        simple_indices.sort_by(|&a, &b| {
            positives[a]
                .factor
                .cmp(&positives[b].factor)
                .then_with(|| positives[b].hvec.cmp(&positives[a].hvec))
        });
        if simple_indices.len() != rank {
            return Err(Error::Internal(format!(
                "found {} simple roots, expected rank {}",
                simple_indices.len(),
                rank
            )));
        }

        let mut gram = Mat::zeros(ambient_dim, ambient_dim);
        for (fi, &(off, len)) in factor_blocks.iter().enumerate() {
            for i in off..off + len {
                gram[(i, i)] = scales[fi].clone();
            }
        }

        let span_basis =
            canonical_rowspace(positives.iter().map(|g| g.hvec.clone()).collect(), ambient_dim);
        if span_basis.rows() != rank {
            return Err(Error::Internal(format!(
                "root span has dimension {}, expected rank {}",
                span_basis.rows(),
                rank
            )));
        }

        let mut hdelta = vec![Rat::zero(); ambient_dim];
        for g in &positives {
            let m = ratio(g.mult as i64, 2);
            for (j, x) in g.hvec.iter().enumerate() {
                if !x.is_zero() {
                    hdelta[j] += x * &m;
                }
            }
        }

        let mut roots: Vec<RootEntry> = positives
            .iter()
            .enumerate()
            .map(|(i, g)| RootEntry {
                hvec: g.hvec.clone(),
                mult: g.mult,
                positive: true,
                simple: is_simple[i],
                factor: g.factor,
                class: g.class,
            })
            .collect();
        let negs: Vec<RootEntry> = roots
            .iter()
            .map(|e| RootEntry {
                hvec: vec_neg(&e.hvec),
                mult: e.mult,
                positive: false,
                simple: false,
                factor: e.factor,
                class: e.class,
            })
            .collect();
        roots.extend(negs);

        let pos_lookup: HashMap<Vec<Rat>, usize> =
            positives.iter().enumerate().map(|(i, g)| (g.hvec.clone(), i)).collect();

        Ok(RootDatum {
            spec: spec.clone(),
            ambient_dim,
            rank,
            gram,
            span_basis,
            roots,
            hdelta,
            simple_indices,
            factor_blocks,
            pos_lookup,
        })
    }

    pub fn pos_count(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn positives(&self) -> impl Iterator<Item = (usize, &RootEntry)> {
        self.roots[..self.pos_count()].iter().enumerate()
    }

    pub fn positive(&self, i: usize) -> &RootEntry {
        &self.roots[i]
    }

    pub fn find_positive(&self, hvec: &[Rat]) -> Option<usize> {
        self.pos_lookup.get(hvec).copied()
    }

    /// Total multiplicity over the positive roots (the dimension of the
    /// nilpotent part, i.e. the number of austerity slots).
    pub fn total_mult(&self) -> u64 {
        self.positives().map(|(_, e)| e.mult as u64).sum()
    }

    pub fn gram_dot(&self, x: &[Rat], y: &[Rat]) -> Rat {
        dot(x, &self.gram.mul_vec(y))
    }

    pub fn gram_norm_sq(&self, x: &[Rat]) -> Rat {
        self.gram_dot(x, x)
    }

    pub fn in_span(&self, v: &[Rat]) -> bool {
        v.len() == self.ambient_dim && in_rowspace(&self.span_basis, v)
    }

    pub fn hdelta(&self) -> &[Rat] {
        &self.hdelta
    }

    /// H-vector of a simple-root coefficient tuple, ordered as
    /// `simple_indices`.
    pub fn dual_vector(&self, coeffs: &[Rat]) -> Result<Vec<Rat>> {
        if coeffs.len() != self.simple_indices.len() {
            return Err(Error::WrongCoefficientCount {
                expected: self.simple_indices.len(),
                got: coeffs.len(),
            });
        }
        let mut v = vec![Rat::zero(); self.ambient_dim];
        for (c, &si) in coeffs.iter().zip(&self.simple_indices) {
            for (j, x) in self.roots[si].hvec.iter().enumerate() {
                if !x.is_zero() {
                    v[j] += c * x;
                }
            }
        }
        Ok(v)
    }

    pub fn label(&self) -> String {
        self.spec.label()
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let mut checks = Vec::new();
        let mut add = |name: &'static str, passed: bool, detail: Option<String>| {
            checks.push(AxiomCheck { name, passed, detail });
        };

        let p = self.pos_count();
        let mut ok = self.roots.len() == 2 * p;
        let mut detail = None;
        if ok {
            for i in 0..p {
                let (a, b) = (&self.roots[i], &self.roots[p + i]);
                if b.hvec != vec_neg(&a.hvec)
                    || a.mult != b.mult
                    || a.factor != b.factor
                    || a.class != b.class
                {
                    ok = false;
                    detail = Some(format!("pair {i} broken"));
                    break;
                }
            }
        } else {
            detail = Some("odd root count".to_string());
        }
        add("negation-closure", ok, detail);

        let mut ok = true;
        let mut detail = None;
        for (i, e) in self.roots.iter().enumerate() {
            let c = chi(&e.hvec);
            if c.is_zero() || c.is_positive() != e.positive {
                ok = false;
                detail = Some(format!("root {i} misflagged"));
                break;
            }
        }
        add("positivity", ok, detail);

        let bad_mult = self.roots.iter().position(|e| e.mult == 0);
        add("multiplicity", bad_mult.is_none(), bad_mult.map(|i| format!("root {i} has mult 0")));

        let mut ok = true;
        let mut detail = None;
        'outer: for (j, mu) in self.roots.iter().enumerate() {
            let gmu = self.gram.mul_vec(&mu.hvec);
            let nmu = dot(&mu.hvec, &gmu);
            if !nmu.is_positive() {
                ok = false;
                detail = Some(format!("root {j} has nonpositive norm"));
                break;
            }
            for lam in &self.roots {
                let c = rat(2) * dot(&lam.hvec, &gmu) / nmu.clone();
                if !c.is_integer() {
                    ok = false;
                    detail = Some(format!("nonintegral pairing against root {j}"));
                    break 'outer;
                }
            }
        }
        add("crystallographic", ok, detail);

        let all_set: HashSet<&[Rat]> = self.roots.iter().map(|e| e.hvec.as_slice()).collect();
        let mut ok = true;
        let mut detail = None;
        'refl: for (j, mu) in self.roots.iter().enumerate() {
            let gmu = self.gram.mul_vec(&mu.hvec);
            let nmu = dot(&mu.hvec, &gmu);
            if nmu.is_zero() {
                ok = false;
                detail = Some(format!("root {j} is isotropic"));
                break;
            }
            for lam in &self.roots {
                let c = rat(2) * dot(&lam.hvec, &gmu) / nmu.clone();
                let image: Vec<Rat> =
                    lam.hvec.iter().zip(&mu.hvec).map(|(l, m)| l - &(&c * m)).collect();
                if !all_set.contains(image.as_slice()) {
                    ok = false;
                    detail = Some(format!("reflection through root {j} leaves the system"));
                    break 'refl;
                }
            }
        }
        add("reflection-closure", ok, detail);

        let pos_set: HashSet<&[Rat]> =
            self.roots[..p].iter().map(|e| e.hvec.as_slice()).collect();
        let mut ok = true;
        let mut detail = None;
        for (i, e) in self.roots[..p].iter().enumerate() {
            let indecomposable = !self.roots[..p].iter().any(|h| {
                h.factor == e.factor
                    && h.hvec != e.hvec
                    && pos_set.contains(crate::linalg::vec_sub(&e.hvec, &h.hvec).as_slice())
            });
            if indecomposable != e.simple {
                ok = false;
                detail = Some(format!("simple flag wrong on positive {i}"));
                break;
            }
        }
        if ok && self.simple_indices.len() != self.rank {
            ok = false;
            detail = Some("simple count differs from rank".to_string());
        }
        add("simple-roots", ok, detail);

        let cross = self
            .roots
            .iter()
            .enumerate()
            .flat_map(|(i, a)| self.roots.iter().skip(i + 1).map(move |b| (i, a, b)))
            .find(|(_, a, b)| a.factor != b.factor && !self.gram_dot(&a.hvec, &b.hvec).is_zero());
        add(
            "factor-orthogonality",
            cross.is_none(),
            cross.map(|(i, ..)| format!("root {i} pairs across factors")),
        );

        let span_ok = self.span_basis.rows() == self.rank
            && self.roots.iter().all(|e| in_rowspace(&self.span_basis, &e.hvec));
        add("span-rank", span_ok, None);

        let mut expect = vec![Rat::zero(); self.ambient_dim];
        for e in &self.roots[..p] {
            let m = ratio(e.mult as i64, 2);
            for (j, x) in e.hvec.iter().enumerate() {
                expect[j] += x * &m;
            }
        }
        add("hdelta-formula", expect == self.hdelta, None);

        let bad = self
            .simple_indices
            .iter()
            .find(|&&si| !self.gram_dot(&self.hdelta, &self.roots[si].hvec).is_positive());
        add(
            "hdelta-dominance",
            bad.is_none(),
            bad.map(|&si| format!("not dominant against simple {si}")),
        );

        AxiomReport { checks }
    }
}

#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_violation(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}
