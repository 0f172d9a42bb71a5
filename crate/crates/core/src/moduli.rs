//! The Legendre λ-line: the j-map, its critical points with exact
//! ramification indices, fiber multiplicities over CM values, and the
//! cross-ratio coordinate of four points on P¹.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{sqrt_rat_approx, sqrt_rat_upper, CRat};
use crate::poly::UniPoly;
use crate::quartic::{BinaryQuartic, ProjValue};
use crate::rat::Rat;
use crate::roots::{complex_roots, CRoot, DEFAULT_PRECISION};

/// `256(λ²−λ+1)³`
fn legendre_numerator() -> UniPoly {
    UniPoly::from_ints(&[1, -1, 1]).pow(3).scale(&Rat::from_int(256))
}

/// `λ²(λ−1)²`
fn legendre_denominator() -> UniPoly {
    (&UniPoly::x() * &UniPoly::from_ints(&[-1, 1])).pow(2)
}

/// `j(λ) = 256(1−λ+λ²)³ / (λ²(1−λ)²)`, with `j(0) = j(1) = ∞`.
pub fn legendre_j(lambda: &Rat) -> ProjValue {
    let d = legendre_denominator().eval(lambda);
    if d.is_zero() {
        ProjValue::Infinity
    } else {
        ProjValue::Finite(legendre_numerator().eval(lambda) / d)
    }
}

/// `j(λ)` at a complex point; `None` at the poles.
pub fn legendre_j_complex(lambda: &CRat) -> Option<CRat> {
    let n = crate::roots::eval_c(&legendre_numerator(), lambda);
    let d = crate::roots::eval_c(&legendre_denominator(), lambda);
    let inv = d.inv()?;
    Some(&n * &inv)
}

/// A reduced rational function `numerator / denominator` over ℚ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalFunction {
    pub numerator: UniPoly,
    pub denominator: UniPoly,
}

/// `j′(λ)` in lowest terms, with monic denominator.
pub fn legendre_derivative() -> RationalFunction {
    let n = legendre_numerator();
    let d = legendre_denominator();
    let num = &(&n.derivative() * &d) - &(&n * &d.derivative());
    let den = &d * &d;
    let g = num.gcd(&den);
    let (num, den) = (num.exact_div(&g), den.exact_div(&g));
    let lc = den.leading();
    RationalFunction {
        numerator: num.scale(&lc.recip().expect("nonzero")),
        denominator: den.monic(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CriticalPoint {
    Rational { lambda: Rat },
    /// The root number `root_index` (ordered by real then imaginary part) of
    /// `minimal_polynomial`.
    Algebraic {
        minimal_polynomial: UniPoly,
        root_index: usize,
        approximation: CRoot,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamificationDatum {
    pub critical_lambda: CriticalPoint,
    pub critical_value: ProjValue,
    pub index: usize,
}

/// Irreducible factors over ℚ of a polynomial whose non-linear part is
/// squarefree-irreducible after removing rational roots, with multiplicity.
fn factor_with_rational_roots(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut rest = p.monic();
    let mut out = Vec::new();
    for r in p.rational_roots() {
        let lin = UniPoly::linear_root(&r);
        let k = rest.factor_multiplicity(&lin).unwrap_or(0);
        rest = rest.exact_div(&lin.pow(k as u32));
        out.push((lin, k));
    }
    for (f, k) in rest.squarefree_decomposition() {
        if !f.is_constant() {
            out.push((f, k));
        }
    }
    out
}

/// Value of `N/D` on ℚ[u]/(m) when it is a rational constant there.
fn value_mod(m: &UniPoly) -> Option<ProjValue> {
    let n = legendre_numerator().rem(m);
    let d = legendre_denominator().rem(m);
    if d.is_zero() {
        return Some(ProjValue::Infinity);
    }
    let (g, _, t) = m.ext_gcd(&d);
    if !g.is_constant() {
        return None;
    }
    let inv = t.scale(&g.coeff(0).recip()?);
    let v = (&n * &inv).rem(m);
    if v.is_constant() {
        Some(ProjValue::Finite(v.coeff(0)))
    } else {
        None
    }
}

/// Critical points of the j-map on the finite λ-line with their critical
/// values and ramification indices. The index is the exact order of
/// vanishing of `N − c·D` along the minimal polynomial of the point.
pub fn legendre_ramification() -> Vec<RamificationDatum> {
    let jp = legendre_derivative();
    let n = legendre_numerator();
    let d = legendre_denominator();
    let mut out = Vec::new();
    for (factor, _) in factor_with_rational_roots(&jp.numerator) {
        let value = value_mod(&factor).expect("critical values of the j-map are rational");
        let c = value.finite().expect("critical points are not poles").clone();
        let vanishing = &n - &d.scale(&c);
        let index = vanishing.factor_multiplicity(&factor).unwrap_or(0);
        if factor.deg0() == 1 {
            out.push(RamificationDatum {
                critical_lambda: CriticalPoint::Rational {
                    lambda: -(factor.coeff(0) / factor.coeff(1)),
                },
                critical_value: value,
                index,
            });
        } else {
            let roots = complex_roots(&factor, DEFAULT_PRECISION).expect("certified roots");
            for (k, root) in roots.into_iter().enumerate() {
                out.push(RamificationDatum {
                    critical_lambda: CriticalPoint::Algebraic {
                        minimal_polynomial: factor.clone(),
                        root_index: k,
                        approximation: root,
                    },
                    critical_value: value.clone(),
                    index,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        let key = |r: &RamificationDatum| match &r.critical_lambda {
            CriticalPoint::Rational { lambda } => (0, lambda.clone(), 0),
            CriticalPoint::Algebraic { root_index, minimal_polynomial, .. } => {
                (1, minimal_polynomial.coeff(0), *root_index)
            }
        };
        key(a).cmp(&key(b))
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberStructure {
    pub a: ProjValue,
    pub multiplicity: u32,
    pub fiber_class_coeff: i64,
    pub reduced_class_coeff: i64,
}

pub const FIBER_CLASS_COEFF: i64 = 12;

fn table_multiplicity(a: &ProjValue) -> u32 {
    match a.finite() {
        Some(x) if *x == 1728 => 2,
        Some(x) if x.is_zero() => 3,
        _ => 1,
    }
}

/// Checks the multiplicity table against the ramification analysis once.
fn table_checked() -> bool {
    static CHECKED: OnceLock<bool> = OnceLock::new();
    *CHECKED.get_or_init(|| {
        let data = legendre_ramification();
        data.iter().all(|r| r.index as u32 == table_multiplicity(&r.critical_value))
            && [0i64, 1728].iter().all(|c| {
                data.iter()
                    .any(|r| r.critical_value == ProjValue::Finite(Rat::from_int(*c)))
            })
    })
}

/// Multiplicity of the fiber of the j-map over `a`: 3 over 0, 2 over 1728,
/// 1 elsewhere (including ∞).
pub fn fiber_structure(a: &ProjValue) -> FiberStructure {
    assert!(table_checked(), "fiber multiplicity table disagrees with ramification");
    let multiplicity = table_multiplicity(a);
    FiberStructure {
        a: a.clone(),
        multiplicity,
        fiber_class_coeff: FIBER_CLASS_COEFF,
        reduced_class_coeff: FIBER_CLASS_COEFF / multiplicity as i64,
    }
}

/// A point of P¹ given exactly, as ∞, or by a certified disk.
#[derive(Clone, Debug, PartialEq)]
pub enum RootValue {
    Exact(Rat),
    Infinity,
    Approx(CRoot),
}

impl From<Rat> for RootValue {
    fn from(r: Rat) -> Self {
        RootValue::Exact(r)
    }
}

impl From<CRoot> for RootValue {
    fn from(r: CRoot) -> Self {
        match r.exact.clone() {
            Some(x) => RootValue::Exact(x),
            None => RootValue::Approx(r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum LambdaValue {
    Exact(Rat),
    Certified {
        #[serde(serialize_with = "ser_c")]
        approximation: CRat,
        error_radius: Rat,
    },
}

fn ser_c<S: serde::Serializer>(z: &CRat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&z.to_decimal_string(40))
}

impl LambdaValue {
    pub fn to_crat(&self) -> CRat {
        match self {
            LambdaValue::Exact(r) => CRat::real(r.clone()),
            LambdaValue::Certified { approximation, .. } => approximation.clone(),
        }
    }
}

/// Difference of two points as an exact complex number plus an error bound;
/// `None` encodes `(x : 1) ∧ (1 : 0)`, which is the constant −1 or 1.
fn point_diff(a: &RootValue, b: &RootValue) -> Option<(CRat, Rat)> {
    let (za, ra) = match a {
        RootValue::Exact(x) => (CRat::real(x.clone()), Rat::zero()),
        RootValue::Approx(c) => (c.approximation.clone(), c.error_radius.clone()),
        RootValue::Infinity => return None,
    };
    let (zb, rb) = match b {
        RootValue::Exact(x) => (CRat::real(x.clone()), Rat::zero()),
        RootValue::Approx(c) => (c.approximation.clone(), c.error_radius.clone()),
        RootValue::Infinity => return None,
    };
    Some((&za - &zb, ra + rb))
}

/// `det((x:1),(y:1)) = x − y`, `det((x:1),(1:0)) = −1`, `det((1:0),(y:1)) = 1`.
fn hdet(a: &RootValue, b: &RootValue) -> Result<(CRat, Rat)> {
    match (a, b) {
        (RootValue::Infinity, RootValue::Infinity) => Err(Error::CoincidentRoots),
        (RootValue::Infinity, _) => Ok((CRat::one(), Rat::zero())),
        (_, RootValue::Infinity) => Ok((-CRat::one(), Rat::zero())),
        _ => {
            let (d, e) = point_diff(a, b).expect("both finite");
            let exact_equal = e.is_zero() && d.is_zero();
            // disks overlap: |d| <= e
            if exact_equal || d.norm_sq() <= &e * &e {
                return Err(Error::CoincidentRoots);
            }
            Ok((d, e))
        }
    }
}

/// The image of the fourth point under the Möbius map sending the first
/// three to `0, 1, ∞`.
pub fn cross_ratio_lambda(roots: &[RootValue; 4]) -> Result<LambdaValue> {
    for i in 0..4 {
        for j in i + 1..4 {
            hdet(&roots[i], &roots[j])?;
        }
    }
    let [r1, r2, r3, r4] = roots;
    let factors = [hdet(r4, r1)?, hdet(r2, r3)?, hdet(r4, r3)?, hdet(r2, r1)?];
    let num = &factors[0].0 * &factors[1].0;
    let den = &factors[2].0 * &factors[3].0;
    let value = &num / &den;
    if factors.iter().all(|(_, e)| e.is_zero()) {
        debug_assert!(value.is_real());
        return Ok(LambdaValue::Exact(value.re));
    }
    // |true/approx − 1| for each factor: ρ for numerator factors,
    // ρ/(1−ρ) for denominator factors, with ρ = e/|d|.
    let mut growth = Rat::one();
    for (k, (d, e)) in factors.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let abs_lo = sqrt_rat_approx(&d.norm_sq(), 128);
        let rho = e / &abs_lo;
        if rho >= Rat::one() {
            return Err(Error::CoincidentRoots);
        }
        let rel = if k < 2 { rho } else { &rho / &(Rat::one() - &rho) };
        growth *= Rat::one() + rel;
    }
    let radius = sqrt_rat_upper(&value.norm_sq(), 128) * (growth - Rat::one());
    Ok(LambdaValue::Certified {
        approximation: value,
        error_radius: radius,
    })
}

/// The four roots of a squarefree binary quartic, rational ones exactly and
/// `(1:0)` as ∞.
pub fn quartic_roots(f: &BinaryQuartic, precision_bits: u32) -> Result<[RootValue; 4]> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if !f.root_type().is_squarefree() {
        return Err(Error::CoincidentRoots);
    }
    let mut roots = Vec::with_capacity(4);
    if f.infinity_multiplicity() > 0 {
        roots.push(RootValue::Infinity);
    }
    for r in complex_roots(&f.dehomogenize(), precision_bits)? {
        roots.push(RootValue::from(r));
    }
    Ok(roots.try_into().expect("a squarefree quartic has four roots"))
}
