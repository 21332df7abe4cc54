//! Desk-scale verification: exhaustive sweeps over bounded-rank data, seeded
//! random experiments, an independent pairing oracle for austerity, and the
//! bundled regression fixtures.
//!
//! Reports are plain data with every rational pre-rendered as a string, so
//! identical inputs serialize to identical bytes.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::congruence::{are_congruent, orbit_partition};
use crate::error::Error;
use crate::geometry::{find_collinear_witness, Subspace};
use crate::linalg::{rat, vec_add, vec_is_zero, vec_scale, Rat};
use crate::rootsys::{Family, FactorSpec, RootDatum, SpaceSpec};
use crate::Result;

/// Seeded sampling parameters shared by the random experiments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    /// Random coordinates are integers in `[-coeff_bound, coeff_bound]` over
    /// the span basis of the flat.
    pub coeff_bound: i64,
    pub codim: usize,
}

impl SampleConfig {
    pub fn new(seed: u64, count: usize, codim: usize) -> Self {
        SampleConfig {
            seed,
            count,
            coeff_bound: 10,
            codim,
        }
    }

    fn check(&self) -> Result<()> {
        if self.count == 0 || self.coeff_bound < 1 {
            return Err(Error::BadSampleConfig);
        }
        Ok(())
    }
}

fn render_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn render_basis(b: &Subspace) -> Vec<Vec<String>> {
    b.basis().row_vecs().iter().map(|r| render_vec(r)).collect()
}

/// Random vector of the flat with integer coordinates over the span basis.
fn random_flat_vector(datum: &RootDatum, bound: i64, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); datum.ambient_dim];
    for i in 0..datum.span_basis.rows() {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            v = vec_add(&v, &vec_scale(&rat(c), datum.span_basis.row(i)));
        }
    }
    v
}

/// Draws a subspace of exactly the requested dimension through the fixed
/// vectors, rejecting rank-deficient draws.
fn sample_subspace(
    datum: &Arc<RootDatum>,
    fixed: &[Vec<Rat>],
    dim: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
    rejected: &mut u64,
) -> Result<Subspace> {
    const MAX_TRIES: usize = 10_000;
    for _ in 0..MAX_TRIES {
        let mut vectors = fixed.to_vec();
        while vectors.len() < dim {
            vectors.push(random_flat_vector(datum, bound, rng));
        }
        let b = Subspace::span(datum, &vectors)?;
        if b.dim() == dim {
            return Ok(b);
        }
        *rejected += 1;
    }
    Err(Error::SamplingFailed { attempts: MAX_TRIES })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CollinearStatus {
    /// A positive root whose sums with all positives avoid the half-sum line.
    Witness { root: usize, hvec: Vec<String> },
    /// Rank below 3: the existence claim does not apply, a witness may or may
    /// not exist, and its absence is not a failure.
    BelowRank { witness: Option<usize> },
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollinearCase {
    pub label: String,
    pub rank: usize,
    pub reducible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(flatten)]
    pub status: CollinearStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollinearReport {
    pub max_rank: usize,
    pub include_reducible: bool,
    pub random_mult_passes: usize,
    pub seed: u64,
    pub cases: Vec<CollinearCase>,
    pub failures: usize,
}

fn irreducible_pool(max_rank: usize) -> Vec<(Family, usize)> {
    let families = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::BC,
        Family::G2,
        Family::F4,
        Family::E6,
        Family::E7,
        Family::E8,
    ];
    let mut out = Vec::new();
    for rank in 1..=max_rank {
        for fam in families {
            if fam.admits_rank(rank) {
                out.push((fam, rank));
            }
        }
    }
    out
}

/// Multisets of at least two irreducible factors with total rank in
/// `[3, max_rank]`, in a fixed deterministic order.
fn reducible_multisets(max_rank: usize) -> Vec<Vec<(Family, usize)>> {
    let pool = irreducible_pool(max_rank.saturating_sub(1));
    let mut out = Vec::new();
    fn go(
        pool: &[(Family, usize)],
        start: usize,
        total: usize,
        max: usize,
        current: &mut Vec<(Family, usize)>,
        out: &mut Vec<Vec<(Family, usize)>>,
    ) {
        if current.len() >= 2 && total >= 3 {
            out.push(current.clone());
        }
        for i in start..pool.len() {
            let r = pool[i].1;
            if total + r > max {
                continue;
            }
            current.push(pool[i]);
            go(pool, i, total + r, max, current, out);
            current.pop();
        }
    }
    go(&pool, 0, 0, max_rank, &mut Vec::new(), &mut out);
    out
}

/// Independent random multiplicity in `[1, 4]` per length orbit per factor.
fn random_mult_spec(base: &SpaceSpec, rng: &mut ChaCha8Rng) -> SpaceSpec {
    let factors = base
        .factors
        .iter()
        .map(|f| {
            let mut factor = f.clone();
            factor.multiplicities = f
                .family
                .orbit_classes(f.rank)
                .iter()
                .map(|&c| (c.to_string(), rng.gen_range(1..=4)))
                .collect();
            factor
        })
        .collect();
    SpaceSpec { factors }
}

fn collinear_case(spec: &SpaceSpec, reducible: bool, note: Option<String>) -> Result<CollinearCase> {
    let datum = RootDatum::build(spec)?;
    let witness = find_collinear_witness(&datum);
    let status = if datum.rank >= 3 {
        match witness {
            Some(root) => CollinearStatus::Witness {
                root,
                hvec: render_vec(&datum.positive(root).hvec),
            },
            None => CollinearStatus::Failure,
        }
    } else {
        CollinearStatus::BelowRank { witness }
    };
    Ok(CollinearCase {
        label: datum.label(),
        rank: datum.rank,
        reducible,
        note,
        status,
    })
}

/// Sweeps every irreducible family at every admitted rank up to `max_rank`
/// (plus, optionally, all reducible factor multisets of total rank 3 and up)
/// and looks for the witness root; each instance is run once with all
/// multiplicities 1 and `random_mult_passes` more times with seeded random
/// multiplicities in `[1, 4]`.
pub fn verify_collinear_all(
    max_rank: usize,
    include_reducible: bool,
    random_mult_passes: usize,
    seed: u64,
) -> Result<CollinearReport> {
    if !(3..=8).contains(&max_rank) {
        return Err(Error::MaxRankOutOfRange { got: max_rank });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs: Vec<(SpaceSpec, bool, Option<String>)> = Vec::new();
    for (fam, rank) in irreducible_pool(max_rank) {
        let note = (fam == Family::D && rank == 3)
            .then(|| "same root system as A3 in another guise".to_string());
        specs.push((SpaceSpec::single(fam, rank), false, note));
    }
    if include_reducible {
        for multiset in reducible_multisets(max_rank) {
            let factors = multiset
                .into_iter()
                .map(|(fam, rank)| FactorSpec::with_mult_one(fam, rank))
                .collect();
            specs.push((SpaceSpec { factors }, true, None));
        }
    }
    let mut cases = Vec::new();
    for (spec, reducible, note) in specs {
        cases.push(collinear_case(&spec, reducible, note.clone())?);
        for _ in 0..random_mult_passes {
            let randomized = random_mult_spec(&spec, &mut rng);
            cases.push(collinear_case(&randomized, reducible, note.clone())?);
        }
    }
    let failures = cases
        .iter()
        .filter(|c| matches!(c.status, CollinearStatus::Failure))
        .count();
    Ok(CollinearReport {
        max_rank,
        include_reducible,
        random_mult_passes,
        seed,
        cases,
        failures,
    })
}

/// The companion sufficient condition for one root: every sum `H_λ + H_μ`
/// pairs nonpositively with some positive root. Implies the witness property,
/// because the half-sum vector pairs positively with every positive root.
pub fn sums_meet_nonpositive_root(datum: &RootDatum, root: usize) -> Result<bool> {
    if root >= datum.pos_count() {
        return Err(Error::RootIndexOutOfRange {
            index: root,
            count: datum.pos_count(),
        });
    }
    let h = &datum.positive(root).hvec;
    Ok(datum.positives().all(|(_, mu)| {
        let sum = vec_add(h, &mu.hvec);
        datum
            .positives()
            .any(|(_, nu)| !datum.gram_dot(&sum, &nu.hvec).is_positive())
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub label: String,
    pub config: SampleConfig,
    pub sampled: usize,
    pub minimal_count: usize,
    pub austere_count: usize,
    pub rejected_draws: u64,
    /// Bases of the austere samples; legitimate finds, recorded for study.
    pub austere_examples: Vec<Vec<Vec<String>>>,
}

/// Samples subspaces through the half-sum vector at the requested codimension
/// and counts how many come out minimal (all must) and austere (expected to be
/// rare).
pub fn genericity_experiment(spec: &SpaceSpec, cfg: &SampleConfig) -> Result<GenericityReport> {
    cfg.check()?;
    let datum = Arc::new(RootDatum::build(spec)?);
    if cfg.codim < 2 || cfg.codim > datum.rank.saturating_sub(1) {
        return Err(Error::CodimOutOfRange {
            codim: cfg.codim,
            min: 2,
            max: datum.rank.saturating_sub(1),
        });
    }
    let dim = datum.rank - cfg.codim;
    let fixed = vec![datum.hdelta().to_vec()];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rejected = 0;
    let mut minimal_count = 0;
    let mut austere_count = 0;
    let mut austere_examples = Vec::new();
    for _ in 0..cfg.count {
        let b = sample_subspace(&datum, &fixed, dim, cfg.coeff_bound, &mut rng, &mut rejected)?;
        if b.is_minimal() {
            minimal_count += 1;
        }
        let (austere, witness) = b.is_austere();
        if austere {
            debug_assert!(witness.is_some_and(|w| w.validate(&b)));
            austere_count += 1;
            austere_examples.push(render_basis(&b));
        }
    }
    Ok(GenericityReport {
        label: datum.label(),
        config: cfg.clone(),
        sampled: cfg.count,
        minimal_count,
        austere_count,
        rejected_draws: rejected,
        austere_examples,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AustereHit {
    pub basis: Vec<Vec<String>>,
    pub minimal: bool,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AustereSearchReport {
    pub label: String,
    pub config: SampleConfig,
    pub require_minimal: bool,
    pub sampled: usize,
    pub rejected_draws: u64,
    pub hits: Vec<AustereHit>,
    /// Number of congruence classes among the hits.
    pub distinct_classes: usize,
}

/// Random search for austere subspaces at a fixed codimension. Hits are
/// reported with their witness pairings and deduplicated up to congruence.
pub fn austere_search(
    spec: &SpaceSpec,
    cfg: &SampleConfig,
    require_minimal: bool,
) -> Result<AustereSearchReport> {
    cfg.check()?;
    let datum = Arc::new(RootDatum::build(spec)?);
    let min_codim = 1;
    let max_codim = if require_minimal {
        datum.rank.saturating_sub(1)
    } else {
        datum.rank
    };
    if cfg.codim < min_codim || cfg.codim > max_codim {
        return Err(Error::CodimOutOfRange {
            codim: cfg.codim,
            min: min_codim,
            max: max_codim,
        });
    }
    let dim = datum.rank - cfg.codim;
    let fixed = if require_minimal {
        vec![datum.hdelta().to_vec()]
    } else {
        Vec::new()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rejected = 0;
    let mut hits = Vec::new();
    let mut hit_subspaces = Vec::new();
    for _ in 0..cfg.count {
        let b = sample_subspace(&datum, &fixed, dim, cfg.coeff_bound, &mut rng, &mut rejected)?;
        let (austere, witness) = b.is_austere();
        if austere {
            let w = witness.expect("austere decisions carry a witness");
            debug_assert!(w.validate(&b));
            if !hit_subspaces.contains(&b) {
                hits.push(AustereHit {
                    basis: render_basis(&b),
                    minimal: b.is_minimal(),
                    pairs: w.pairs,
                });
                hit_subspaces.push(b);
            }
        }
    }
    let distinct_classes = orbit_partition(&hit_subspaces)?.count();
    Ok(AustereSearchReport {
        label: datum.label(),
        config: cfg.clone(),
        require_minimal,
        sampled: cfg.count,
        rejected_draws: rejected,
        hits,
        distinct_classes,
    })
}

/// Exhaustive backtracking search for a cancelling pairing of the projected
/// root vectors, independent of the multiset-symmetry decision. Exponential;
/// intended for small slot counts.
pub fn austere_pairing_oracle(b: &Subspace) -> bool {
    let datum = b.datum();
    let mut projections = Vec::new();
    for (i, e) in datum.positives() {
        let p = b.project_normal(&datum.positive(i).hvec);
        for _ in 0..e.mult {
            projections.push(p.clone());
        }
    }

    fn match_from(proj: &[Vec<Rat>], paired: &mut [bool]) -> bool {
        let Some(s) = paired.iter().position(|&x| !x) else {
            return true;
        };
        paired[s] = true;
        if vec_is_zero(&proj[s]) {
            if match_from(proj, paired) {
                return true;
            }
        } else {
            for t in (s + 1)..proj.len() {
                if paired[t] {
                    continue;
                }
                if vec_is_zero(&vec_add(&proj[s], &proj[t])) {
                    paired[t] = true;
                    if match_from(proj, paired) {
                        return true;
                    }
                    paired[t] = false;
                }
            }
        }
        paired[s] = false;
        false
    }

    let mut paired = vec![false; projections.len()];
    match_from(&projections, &mut paired)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub checks: Vec<FixtureCheck>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

/// The bundled regression fixtures: the two reference austere examples, the
/// non-austere half-sum lines, the congruence decisions, tube trace spot
/// values, and the impossibility of constant principal curvatures at
/// codimension two and up.
pub fn reference_fixtures() -> FixtureReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| {
        checks.push(FixtureCheck {
            name,
            passed,
            detail,
        });
    };

    let a4 = Arc::new(
        RootDatum::build(&SpaceSpec::single(Family::A, 4)).expect("A4 always builds"),
    );
    let a4_plane = Subspace::span(
        &a4,
        &[ints(&[1, 0, 0, 0, -1]), ints(&[0, 1, 0, -1, 0])],
    )
    .expect("fixture vectors lie in the flat");
    {
        let (austere, witness) = a4_plane.is_austere();
        let valid = witness.as_ref().is_some_and(|w| w.validate(&a4_plane));
        push(
            "austere-plane-a4",
            austere && valid && a4_plane.is_minimal(),
            format!(
                "austere={austere}, witness_valid={valid}, minimal={}",
                a4_plane.is_minimal()
            ),
        );
    }

    let product = Arc::new(
        RootDatum::build(&crate::rootsys::preset("(rh2)^4").expect("preset exists"))
            .expect("rank-one products always build"),
    );
    let product_plane = Subspace::span(
        &product,
        &[
            ints(&[1, -1, 1, -1, 0, 0, 0, 0]),
            ints(&[0, 0, 0, 0, 1, -1, 1, -1]),
        ],
    )
    .expect("fixture vectors lie in the flat");
    {
        let (austere, witness) = product_plane.is_austere();
        let pairs = witness.map(|w| w.pairs).unwrap_or_default();
        let expected = pairs == vec![(0, 1), (2, 3)];
        push(
            "austere-product-rank-one",
            austere && expected,
            format!("austere={austere}, pairs={pairs:?}"),
        );
    }

    let mut lines = Vec::new();
    for family in [Family::A, Family::B, Family::C, Family::BC] {
        let d = Arc::new(
            RootDatum::build(&SpaceSpec::single(family, 3)).expect("rank 3 always builds"),
        );
        let line = Subspace::span(&d, &[d.hdelta().to_vec()]).expect("the half-sum spans a line");
        let (austere, _) = line.is_austere();
        push(
            "half-sum-line-not-austere",
            !austere,
            format!("{}: austere={austere}", d.label()),
        );
        lines.push(line);
    }

    {
        let alpha = |k: usize| {
            let mut v = vec![0i64; 5];
            v[k - 1] = 1;
            v[k] = -1;
            ints(&v)
        };
        let span2 = |extra: Vec<Rat>| {
            Subspace::span(&a4, &[a4.hdelta().to_vec(), extra]).expect("fixture subspace")
        };
        let b1 = span2(alpha(1));
        let b2 = span2(alpha(4));
        let b3 = span2(alpha(2));
        let flip = are_congruent(&b1, &b2).ok().flatten();
        let flip_ok = flip.is_some_and(|w| w.validate(&a4));
        let separated = matches!(are_congruent(&b1, &b3), Ok(None));
        let classes = orbit_partition(&[b1, b2, b3]).map(|p| p.count());
        push(
            "congruence-a4",
            flip_ok && separated && classes == Ok(2),
            format!("flip={flip_ok}, separated={separated}, classes={classes:?}"),
        );
    }

    {
        let a3 = Arc::new(
            RootDatum::build(&SpaceSpec::single(Family::A, 3)).expect("A3 always builds"),
        );
        let line = Subspace::span(&a3, &[a3.hdelta().to_vec()]).expect("line");
        let t = crate::linalg::ratio(1, 2);
        let xi = ints(&[1, -1, -1, 1]);
        let trace = line
            .tube_spectrum(&xi, &t)
            .and_then(|s| s.trace())
            .expect("fixture tube");
        let cmc = line.tube_cmc(&t).expect("fixture cmc");
        let t2 = crate::linalg::ratio(3, 7);
        let cmc2 = a4_plane.tube_cmc(&t2).expect("fixture cmc");
        let passed = trace == rat(-2) && cmc == rat(-2) && cmc2 == crate::linalg::ratio(-7, 3);
        push(
            "tube-trace-spot-values",
            passed,
            format!("trace={trace}, cmc={cmc}, plane_cmc={cmc2}"),
        );
    }

    {
        let mut all_false = true;
        let mut detail = String::new();
        for b in lines.iter().chain([&a4_plane, &product_plane]) {
            match b.is_cpc() {
                Ok((false, Some(w))) if w.validate(b) => {}
                other => {
                    all_false = false;
                    detail = format!("unexpected outcome {other:?}");
                    break;
                }
            }
        }
        if all_false {
            detail = "every codim >= 2 fixture: constancy fails with a valid witness".to_string();
        }
        push("cpc-impossible", all_false, detail);
    }

    FixtureReport { checks }
}
