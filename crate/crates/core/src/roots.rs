//! Certified complex root isolation for polynomials over ℚ.
//!
//! Multiplicities come from the exact squarefree decomposition. Each
//! squarefree factor of degree ≥ 2 is solved by Weierstrass (Durand–Kerner)
//! iteration on rounded complex rationals. A root approximation `z` of a
//! squarefree factor `g` of degree `n` is certified by the disk of radius
//! `n·|g(z)/g'(z)|`, which always contains a root of `g`; when all disks are
//! pairwise disjoint there is exactly one root in each. The disjointness test
//! is carried out on exact squared distances.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{pow2, sqrt_rat_upper, CRat};
use crate::poly::UniPoly;
use crate::rat::Rat;

pub const DEFAULT_PRECISION: u32 = 256;
pub const MAX_PRECISION: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CRoot {
    #[serde(serialize_with = "ser_crat")]
    pub approximation: CRat,
    /// Upper bound on the distance from `approximation` to the root.
    pub error_radius: Rat,
    pub multiplicity: usize,
    /// Set when the root is rational; then `approximation` equals it and the
    /// radius is zero.
    pub exact: Option<Rat>,
    pub precision_bits: u32,
}

fn ser_crat<S: serde::Serializer>(z: &CRat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&z.to_decimal_string(40))
}

impl CRoot {
    pub fn exact(r: Rat, multiplicity: usize, bits: u32) -> Self {
        CRoot {
            approximation: CRat::real(r.clone()),
            error_radius: Rat::zero(),
            multiplicity,
            exact: Some(r),
            precision_bits: bits,
        }
    }

    /// Whether the certified disks of two roots overlap.
    pub fn overlaps(&self, other: &CRoot) -> bool {
        let d2 = (&self.approximation - &other.approximation).norm_sq();
        let rsum = &self.error_radius + &other.error_radius;
        d2 <= &rsum * &rsum
    }

    /// Lexicographic (re, im) comparison of the approximations.
    pub fn cmp_position(&self, other: &CRoot) -> std::cmp::Ordering {
        (&self.approximation.re, &self.approximation.im)
            .cmp(&(&other.approximation.re, &other.approximation.im))
    }
}

/// All distinct complex roots of `p`, with multiplicities summing to `deg p`.
/// Precision doubles from `precision_bits` up to 4096 until every disk is
/// certified and the disks are pairwise separated.
pub fn complex_roots(p: &UniPoly, precision_bits: u32) -> Result<Vec<CRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if precision_bits < 64 {
        return Err(Error::PrecisionTooLow(precision_bits));
    }
    let factors = p.squarefree_decomposition();
    let mut bits = precision_bits;
    let mut starts: Vec<Option<Vec<CRat>>> = vec![None; factors.len()];
    loop {
        match isolate_at(&factors, bits, &mut starts) {
            Some(mut roots) => {
                roots.sort_by(|a, b| a.cmp_position(b));
                return Ok(roots);
            }
            None if bits >= MAX_PRECISION => {
                return Err(Error::CertificationFailed { bits });
            }
            None => bits = (bits * 2).min(MAX_PRECISION),
        }
    }
}

fn isolate_at(
    factors: &[(UniPoly, usize)],
    bits: u32,
    starts: &mut [Option<Vec<CRat>>],
) -> Option<Vec<CRoot>> {
    let mut out = Vec::new();
    for (idx, (g, mult)) in factors.iter().enumerate() {
        if g.deg0() == 1 {
            let r = -(g.coeff(0) / g.coeff(1));
            out.push(CRoot::exact(r, *mult, bits));
            continue;
        }
        let zs = weierstrass(g, bits, starts[idx].take());
        let radii = certify_factor(g, &zs)?;
        starts[idx] = Some(zs.clone());
        for (z, r) in zs.into_iter().zip(radii) {
            if z.im.abs() <= r {
                if let Some(x) = g.rational_root_near(&z.re, &r) {
                    if (&CRat::real(x.clone()) - &z).norm_sq() <= &r * &r {
                        out.push(CRoot::exact(x, *mult, bits));
                        continue;
                    }
                }
            }
            out.push(CRoot {
                approximation: z,
                error_radius: r,
                multiplicity: *mult,
                exact: None,
                precision_bits: bits,
            });
        }
    }
    if separated(&out) {
        Some(out)
    } else {
        None
    }
}

/// Every radius is below half the minimum distance between approximations.
fn separated(roots: &[CRoot]) -> bool {
    if roots.len() < 2 {
        return true;
    }
    let mut min_d2: Option<Rat> = None;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d2 = (&roots[i].approximation - &roots[j].approximation).norm_sq();
            if d2.is_zero() {
                return false;
            }
            min_d2 = Some(match min_d2 {
                Some(m) if m <= d2 => m,
                _ => d2,
            });
        }
    }
    let min_d2 = min_d2.unwrap();
    // r < d/2  <=>  4 r^2 < d^2
    roots
        .iter()
        .all(|r| &r.error_radius * &r.error_radius * Rat::from_int(4) < min_d2)
}

/// Radii `n·|g(z)|/|g'(z)|` (as rational upper bounds); `None` if some
/// derivative vanishes at an approximation.
fn certify_factor(g: &UniPoly, zs: &[CRat]) -> Option<Vec<Rat>> {
    let n = Rat::from_int(g.deg0() as i64);
    let gp = g.derivative();
    let mut radii = Vec::with_capacity(zs.len());
    for z in zs {
        let v = eval_c(g, z);
        let d = eval_c(&gp, z);
        let d2 = d.norm_sq();
        if d2.is_zero() {
            return None;
        }
        let r2 = &n * &n * v.norm_sq() / d2;
        radii.push(sqrt_rat_upper(&r2, 64));
    }
    Some(radii)
}

pub fn eval_c(p: &UniPoly, z: &CRat) -> CRat {
    let mut acc = CRat::zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * z) + &CRat::real(c.clone());
    }
    acc
}

/// Durand–Kerner on the monic form of `g`: converged in double precision
/// first when possible, then refined on rationals rounded to `bits`.
fn weierstrass(g: &UniPoly, bits: u32, start: Option<Vec<CRat>>) -> Vec<CRat> {
    let g = g.monic();
    let n = g.deg0();
    let mut zs = match start {
        Some(s) if s.len() == n => s,
        _ => float_start(&g).unwrap_or_else(|| initial_points(&g)),
    };
    let tol2 = pow2(-2 * bits as i64);
    let work = bits + 32;
    for _ in 0..(200 + 4 * bits as usize) {
        let mut max_rel = Rat::zero();
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let mut denom = CRat::one();
            for j in 0..n {
                if i != j {
                    denom = &denom * &(&zs[i] - &zs[j]);
                }
            }
            if denom.is_zero() {
                // perturb coincident iterates
                let nudge = CRat::new(pow2(-(bits as i64) / 2), pow2(-(bits as i64) / 3));
                next.push(&zs[i] + &nudge);
                max_rel = Rat::one();
                continue;
            }
            let step = &eval_c(&g, &zs[i]) / &denom;
            let scale = zs[i].norm_sq() + Rat::one();
            let rel = step.norm_sq() / scale;
            if rel > max_rel {
                max_rel = rel;
            }
            next.push((&zs[i] - &step).round(work));
        }
        zs = next;
        if max_rel < tol2 {
            break;
        }
    }
    zs
}

/// Double-precision Durand–Kerner; `None` if the coefficients do not fit
/// or the iteration does not settle.
fn float_start(g: &UniPoly) -> Option<Vec<CRat>> {
    let coeffs: Vec<f64> = g.coeffs().iter().map(Rat::to_f64).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let n = g.deg0();
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let bound = 1.0 + coeffs[..n].iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let radius = bound.min(1e6);
    let seed = Complex64::new(0.4, 0.9);
    let mut zs: Vec<Complex64> = (1..=n).map(|k| seed.powi(k as i32) * radius).collect();
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        let prev = zs.clone();
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (prev[i] - prev[j]));
            if denom.norm() == 0.0 {
                return None;
            }
            let step = eval(prev[i]) / denom;
            worst = worst.max(step.norm() / (1.0 + prev[i].norm()));
            zs[i] = prev[i] - step;
        }
        if !worst.is_finite() {
            return None;
        }
        if worst < 1e-14 {
            return zs
                .iter()
                .map(|z| Some(CRat::new(Rat::from_f64(z.re)?, Rat::from_f64(z.im)?)))
                .collect();
        }
    }
    None
}

/// Points on a circle of radius equal to the Cauchy bound, rotated off the
/// real axis.
fn initial_points(g: &UniPoly) -> Vec<CRat> {
    let n = g.deg0();
    let bound = g.coeffs()[..n]
        .iter()
        .map(Rat::abs)
        .fold(Rat::zero(), |a, b| if b > a { b } else { a })
        + Rat::one();
    // (0.4 + 0.9i)^k scaled, the classic choice that avoids symmetric stalls
    let seed = CRat::new(Rat::new(2, 5), Rat::new(9, 10));
    let mut w = CRat::one();
    let scale = Rat::min_rat(bound, Rat::from_int(1 << 20));
    (0..n)
        .map(|_| {
            w = (&w * &seed).round(64);
            w.scale(&scale).round(64)
        })
        .collect()
}
