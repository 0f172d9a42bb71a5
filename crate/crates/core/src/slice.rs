//! Enumerative checks on a Schubert slice: a plane Π of quadrics and a point
//! q ∈ Π. Lines through q in Π form a P¹; restricting the determinant
//! hypersurface to each line gives a binary quartic `f_u`, and the
//! discriminant of `f_u` as a polynomial in the line parameter counts the
//! lines tangent to the plane quartic curve `Π ∩ D`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::pencil::{det_quartic, SymMat4};
use crate::poly::UniPoly;
use crate::quartic::ProjValue;
use crate::rat::Rat;

pub const RETRY_BOUND: u32 = 32;
pub const DEFAULT_HEIGHT: i64 = 10;
/// Weighted degree of Δ and of the j-fiber numerator in the line parameter.
pub const SLICE_DEGREE: usize = 12;

/// A plane spanned by three quadrics, and a point of it in span coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSlice {
    pub span: [SymMat4; 3],
    pub q_coeffs: [Rat; 3],
    pub seed: u64,
}

impl PlaneSlice {
    pub fn new(span: [SymMat4; 3], q_coeffs: [Rat; 3], seed: u64) -> Result<Self> {
        let sl = PlaneSlice { span, q_coeffs, seed };
        sl.validate()?;
        Ok(sl)
    }

    pub fn validate(&self) -> Result<()> {
        let rows: Vec<Vec<Rat>> = self.span.iter().map(|m| m.upper().to_vec()).collect();
        if linalg::rank(&Matrix::from_rows(rows)) < 3 {
            return Err(Error::InvalidSlice("span matrices are linearly dependent".into()));
        }
        if self.point(&self.q_coeffs).det().is_zero() {
            return Err(Error::InvalidSlice("q lies on the determinant curve".into()));
        }
        Ok(())
    }

    /// `Σ cᵢ·spanᵢ`
    pub fn point(&self, c: &[Rat; 3]) -> Matrix<Rat> {
        let mut m = Matrix::<Rat>::zeros(4, 4);
        for (ci, si) in c.iter().zip(&self.span) {
            m = m.add(&si.matrix().scale(ci));
        }
        m
    }

    /// Two unit vectors completing `q` to a basis of the span coordinates.
    pub fn complement(&self) -> ([Rat; 3], [Rat; 3]) {
        let unit = |i: usize| -> [Rat; 3] {
            std::array::from_fn(|k| if k == i { Rat::one() } else { Rat::zero() })
        };
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let m = Matrix::from_rows(vec![self.q_coeffs.to_vec(), unit(a).to_vec(), unit(b).to_vec()]);
            if !m.det().is_zero() {
                return (unit(a), unit(b));
            }
        }
        unreachable!("q is a nonzero vector")
    }
}

/// Coefficients `c_k(u)` of `f_u(s,t) = det(s·M(q) + t·M(p0 + u·p1))`, found
/// by interpolation at `u = 0..4` (each `c_k` has degree at most `k`).
fn chart_coefficients(sl: &PlaneSlice, p0: &[Rat; 3], p1: &[Rat; 3]) -> [UniPoly; 5] {
    let mq = sl.point(&sl.q_coeffs);
    let samples: Vec<(Rat, [Rat; 5])> = (0..5)
        .map(|u| {
            let u = Rat::from_int(u);
            let dir: [Rat; 3] = std::array::from_fn(|i| &p0[i] + &(&u * &p1[i]));
            let f = det_quartic(&mq, &sl.point(&dir));
            (u, f.coeffs().clone())
        })
        .collect();
    std::array::from_fn(|k| {
        let pts: Vec<(Rat, Rat)> = samples.iter().map(|(u, c)| (u.clone(), c[k].clone())).collect();
        UniPoly::interpolate(&pts)
    })
}

/// `I(u)` and `J(u)` of the binomially weighted coefficients.
fn invariants_poly(c: &[UniPoly; 5]) -> (UniPoly, UniPoly) {
    let binom = [1, 4, 6, 4, 1];
    let a: Vec<UniPoly> = c
        .iter()
        .zip(binom)
        .map(|(ck, b)| ck.scale(&Rat::new(1, b)))
        .collect();
    let k = |n: i64| Rat::from_int(n);
    let i = &(&(&a[0] * &a[4]) - &(&a[1] * &a[3]).scale(&k(4))) + &(&a[2] * &a[2]).scale(&k(3));
    let j = &(&(&(&(&a[0] * &a[2]) * &a[4]) + &(&(&a[1] * &a[2]) * &a[3]).scale(&k(2)))
        - &(&(&a[2] * &a[2]) * &a[2]))
        - &(&(&(&a[0] * &a[3]) * &a[3]) + &(&(&a[1] * &a[1]) * &a[4]));
    (i, j)
}

/// Invariants of `f` along both charts of the P¹ of lines through q.
#[derive(Clone, Debug)]
pub struct SliceCharts {
    /// `I, J` in the chart `r(u) = p0 + u·p1`.
    pub i_u: UniPoly,
    pub j_u: UniPoly,
    /// `I, J` in the chart `r(v) = v·p0 + p1`.
    pub i_v: UniPoly,
    pub j_v: UniPoly,
}

impl SliceCharts {
    pub fn new(sl: &PlaneSlice) -> Self {
        let (p0, p1) = sl.complement();
        let (i_u, j_u) = invariants_poly(&chart_coefficients(sl, &p0, &p1));
        let (i_v, j_v) = invariants_poly(&chart_coefficients(sl, &p1, &p0));
        SliceCharts { i_u, j_u, i_v, j_v }
    }

    pub fn delta_u(&self) -> UniPoly {
        discriminant_of(&self.i_u, &self.j_u)
    }

    pub fn delta_v(&self) -> UniPoly {
        discriminant_of(&self.i_v, &self.j_v)
    }

    /// The second chart is the first under `v = 1/u`: weights 4, 6, 12.
    pub fn consistent(&self) -> bool {
        self.i_v == self.i_u.reversed(4)
            && self.j_v == self.j_u.reversed(6)
            && self.delta_v() == self.delta_u().reversed(SLICE_DEGREE)
    }
}

fn discriminant_of(i: &UniPoly, j: &UniPoly) -> UniPoly {
    &i.pow(3) - &j.pow(2).scale(&Rat::from_int(27))
}

/// `Δ(f_u)` as an exact polynomial in the line parameter `u`.
pub fn tangent_polynomial(sl: &PlaneSlice) -> UniPoly {
    SliceCharts::new(sl).delta_u()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentCount {
    pub count_with_multiplicity: usize,
    pub all_simple: bool,
    pub finite_degree: usize,
    pub infinity_multiplicity: usize,
    pub charts_agree: bool,
}

/// Roots of a polynomial of weighted degree `w` counted over both charts:
/// the finite degree plus the order of the second-chart polynomial at 0.
fn count_both_charts(p_u: &UniPoly, p_v: &UniPoly, w: usize) -> Option<(usize, usize)> {
    if p_u.is_zero() {
        return None;
    }
    let at_inf = p_v.root_multiplicity(&Rat::zero())?;
    debug_assert_eq!(p_u.deg0() + at_inf, w);
    Some((p_u.deg0(), at_inf))
}

pub fn count_tangents(sl: &PlaneSlice) -> TangentCount {
    count_tangents_in(&SliceCharts::new(sl))
}

fn count_tangents_in(ch: &SliceCharts) -> TangentCount {
    let (du, dv) = (ch.delta_u(), ch.delta_v());
    let charts_agree = ch.consistent();
    match count_both_charts(&du, &dv, SLICE_DEGREE) {
        Some((deg, inf)) => TangentCount {
            count_with_multiplicity: deg + inf,
            all_simple: charts_agree && du.is_squarefree() && dv.is_squarefree(),
            finite_degree: deg,
            infinity_multiplicity: inf,
            charts_agree,
        },
        None => TangentCount {
            count_with_multiplicity: 0,
            all_simple: false,
            finite_degree: 0,
            infinity_multiplicity: 0,
            charts_agree,
        },
    }
}

/// Number of lines through q whose quartic has `j = a`, with multiplicity:
/// the roots of `(1728 − a)·I³ + 27a·J²` over both charts.
pub fn j_fiber_count(sl: &PlaneSlice, a: &ProjValue) -> Result<usize> {
    j_fiber_count_in(&SliceCharts::new(sl), a)
}

fn j_fiber_poly(i: &UniPoly, j: &UniPoly, a: &Rat) -> UniPoly {
    &i.pow(3).scale(&(Rat::from_int(1728) - a)) + &j.pow(2).scale(&(Rat::from_int(27) * a))
}

fn j_fiber_count_in(ch: &SliceCharts, a: &ProjValue) -> Result<usize> {
    let a = a.finite().ok_or(Error::PoleValue)?;
    let nu = j_fiber_poly(&ch.i_u, &ch.j_u, a);
    let nv = j_fiber_poly(&ch.i_v, &ch.j_v, a);
    let (deg, inf) = count_both_charts(&nu, &nv, SLICE_DEGREE)
        .ok_or_else(|| Error::InvalidSlice("j is constant along the lines through q".into()))?;
    Ok(deg + inf)
}

fn random_symmetric(rng: &mut ChaCha8Rng, height: i64) -> SymMat4 {
    let mut m = Matrix::<Rat>::zeros(4, 4);
    for i in 0..4 {
        for j in i..4 {
            let v = Rat::from_int(rng.gen_range(-height..=height));
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    SymMat4::new(m).expect("symmetric by construction")
}

/// A slice together with the sampling record that produced it.
#[derive(Clone, Debug)]
pub struct SampledSlice {
    pub slice: PlaneSlice,
    pub retries: u32,
    pub genericity_failures: Vec<String>,
}

/// Genericity conditions beyond the slice invariants: the tangent
/// polynomial has total degree 12 and is squarefree in both charts.
pub fn genericity_failure(sl: &PlaneSlice) -> Option<String> {
    let t = count_tangents(sl);
    if t.count_with_multiplicity != SLICE_DEGREE {
        return Some(format!("tangent polynomial has total degree {}", t.count_with_multiplicity));
    }
    if !t.charts_agree {
        return Some("charts disagree".into());
    }
    if !t.all_simple {
        return Some("tangent polynomial is not squarefree".into());
    }
    None
}

/// Deterministic sampling from `seed`, resampling up to the retry bound.
pub fn sample_slice(seed: u64, height: i64) -> Result<SampledSlice> {
    if height < 2 {
        return Err(Error::InvalidArgument(format!("height must be at least 2, got {height}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for attempt in 0..=RETRY_BOUND {
        let span = [
            random_symmetric(&mut rng, height),
            random_symmetric(&mut rng, height),
            random_symmetric(&mut rng, height),
        ];
        let q: [Rat; 3] = std::array::from_fn(|_| Rat::from_int(rng.gen_range(-height..=height)));
        let candidate = PlaneSlice {
            span,
            q_coeffs: q,
            seed,
        };
        let problem = match candidate.validate() {
            Err(e) => Some(e.to_string()),
            Ok(()) => genericity_failure(&candidate),
        };
        match problem {
            None => {
                return Ok(SampledSlice {
                    slice: candidate,
                    retries: attempt,
                    genericity_failures: failures,
                })
            }
            Some(msg) => failures.push(format!("attempt {attempt}: {msg}")),
        }
    }
    Err(Error::GenericityExhausted {
        seed,
        retries: RETRY_BOUND,
        diagnostics: failures,
    })
}

pub fn random_slice(seed: u64, height: i64) -> Result<PlaneSlice> {
    sample_slice(seed, height).map(|s| s.slice)
}

/// Per-trial record of a campaign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub seed: u64,
    pub retries: u32,
    pub genericity_failures: Vec<String>,
    pub tangent_poly_degree: usize,
    pub tangent_squarefree: bool,
    pub tangent_count_with_multiplicity: usize,
    /// Keyed by the tested value as `"num/den"`.
    pub j_fiber_counts: BTreeMap<String, usize>,
    pub slice: PlaneSlice,
}

impl SliceReport {
    pub fn passes(&self) -> bool {
        self.tangent_squarefree
            && self.tangent_count_with_multiplicity == SLICE_DEGREE
            && self.j_fiber_counts.values().all(|&c| c == SLICE_DEGREE)
    }
}

pub fn run_trial(seed: u64, height: i64, test_values: &[Rat]) -> Result<SliceReport> {
    let sampled = sample_slice(seed, height)?;
    evaluate(sampled.slice, sampled.retries, sampled.genericity_failures, test_values)
}

fn evaluate(slice: PlaneSlice, retries: u32, failures: Vec<String>, test_values: &[Rat]) -> Result<SliceReport> {
    let ch = SliceCharts::new(&slice);
    let t = count_tangents_in(&ch);
    let mut counts = BTreeMap::new();
    for a in test_values {
        let c = j_fiber_count_in(&ch, &ProjValue::Finite(a.clone()))?;
        counts.insert(a.to_fraction_string(), c);
    }
    Ok(SliceReport {
        seed: slice.seed,
        retries,
        genericity_failures: failures,
        tangent_poly_degree: t.finite_degree,
        tangent_squarefree: t.all_simple,
        tangent_count_with_multiplicity: t.count_with_multiplicity,
        j_fiber_counts: counts,
        slice,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub n_trials: usize,
    pub seed: u64,
    pub height: i64,
    pub test_values: Vec<Rat>,
    pub all_passed: bool,
    pub total_retries: u64,
    /// Seeds of trials that deviated from 12; the trial records carry the
    /// full slice for reproduction.
    pub failed_seeds: Vec<u64>,
    pub trials: Vec<SliceReport>,
}

/// Trial `i` uses seed `seed + i`. Trials run in parallel when the
/// `parallel` feature is on; the report is in seed order either way.
pub fn slice_campaign(n_trials: usize, seed: u64, height: i64, test_values: &[Rat]) -> Result<CampaignReport> {
    if n_trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let seeds: Vec<u64> = (0..n_trials as u64).map(|i| seed.wrapping_add(i)).collect();
    let trials = run_trials(&seeds, height, test_values)?;
    Ok(assemble(n_trials, seed, height, test_values, trials))
}

/// The same campaign, always on the calling thread.
pub fn slice_campaign_sequential(
    n_trials: usize,
    seed: u64,
    height: i64,
    test_values: &[Rat],
) -> Result<CampaignReport> {
    if n_trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let trials = (0..n_trials as u64)
        .map(|i| run_trial(seed.wrapping_add(i), height, test_values))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(n_trials, seed, height, test_values, trials))
}

/// A campaign over caller-supplied slices, with no resampling: a slice that
/// fails the genericity conditions is an error naming it. The report's
/// `seed` is that of the first slice and its `height` is 0.
pub fn check_slices(slices: &[PlaneSlice], test_values: &[Rat]) -> Result<CampaignReport> {
    if slices.is_empty() {
        return Err(Error::InvalidArgument("at least one slice is required".into()));
    }
    let mut trials = Vec::with_capacity(slices.len());
    for (i, sl) in slices.iter().enumerate() {
        let problem = match sl.validate() {
            Err(e) => Some(e.to_string()),
            Ok(()) => genericity_failure(sl),
        };
        if let Some(msg) = problem {
            return Err(Error::InvalidSlice(format!("slice {i} (seed {}): {msg}", sl.seed)));
        }
        trials.push(evaluate(sl.clone(), 0, Vec::new(), test_values)?);
    }
    Ok(assemble(slices.len(), slices[0].seed, 0, test_values, trials))
}

#[cfg(feature = "parallel")]
fn run_trials(seeds: &[u64], height: i64, test_values: &[Rat]) -> Result<Vec<SliceReport>> {
    use rayon::prelude::*;
    seeds
        .par_iter()
        .map(|&s| run_trial(s, height, test_values))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_trials(seeds: &[u64], height: i64, test_values: &[Rat]) -> Result<Vec<SliceReport>> {
    seeds.iter().map(|&s| run_trial(s, height, test_values)).collect()
}

fn assemble(n_trials: usize, seed: u64, height: i64, test_values: &[Rat], trials: Vec<SliceReport>) -> CampaignReport {
    let failed_seeds: Vec<u64> = trials.iter().filter(|t| !t.passes()).map(|t| t.seed).collect();
    CampaignReport {
        n_trials,
        seed,
        height,
        test_values: test_values.to_vec(),
        all_passed: failed_seeds.is_empty(),
        total_retries: trials.iter().map(|t| t.retries as u64).sum(),
        failed_seeds,
        trials,
    }
}
