//! Binary quartic forms and their classical invariants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::rat::Rat;

/// `f(s,t) = c₀s⁴ + c₁s³t + c₂s²t² + c₃st³ + c₄t⁴`, stored as plain
/// coefficients. JSON: an array of five `"num/den"` strings.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryQuartic {
    c: [Rat; 5],
}

const BINOM4: [i64; 5] = [1, 4, 6, 4, 1];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTriple {
    #[serde(rename = "I")]
    pub i: Rat,
    #[serde(rename = "J")]
    pub j: Rat,
    #[serde(rename = "Delta")]
    pub delta: Rat,
}

/// A point of P¹ over ℚ: a finite rational value or ∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjValue {
    Finite(Rat),
    Infinity,
}

impl ProjValue {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ProjValue::Finite(r) => Some(r),
            ProjValue::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjValue::Infinity)
    }
}

impl From<Rat> for ProjValue {
    fn from(r: Rat) -> Self {
        ProjValue::Finite(r)
    }
}

impl fmt::Display for ProjValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjValue::Finite(r) => write!(f, "{r}"),
            ProjValue::Infinity => write!(f, "infinity"),
        }
    }
}

impl std::str::FromStr for ProjValue {
    type Err = crate::rat::ParseRatError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(ProjValue::Infinity),
            other => other.parse().map(ProjValue::Finite),
        }
    }
}

impl Serialize for ProjValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ProjValue::Finite(r) => r.serialize(s),
            ProjValue::Infinity => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for ProjValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Root multiplicities of a binary quartic on P¹, in descending order.
/// The zero form has no root type; it is flagged instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootType {
    parts: Vec<usize>,
    zero_form: bool,
}

impl RootType {
    pub fn from_parts(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        RootType {
            parts,
            zero_form: false,
        }
    }

    pub fn zero_form() -> Self {
        RootType {
            parts: Vec::new(),
            zero_form: true,
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn is_zero_form(&self) -> bool {
        self.zero_form
    }

    pub fn is_squarefree(&self) -> bool {
        !self.zero_form && self.parts == [1, 1, 1, 1]
    }

    pub fn is(&self, parts: &[usize]) -> bool {
        !self.zero_form && self.parts == parts
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero_form {
            return write!(f, "zero");
        }
        let s: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "{}", s.join("+"))
    }
}

impl Serialize for RootType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl BinaryQuartic {
    pub fn new(c: [Rat; 5]) -> Self {
        BinaryQuartic { c }
    }

    pub fn from_ints(c: [i64; 5]) -> Self {
        BinaryQuartic {
            c: c.map(Rat::from_int),
        }
    }

    pub fn zero() -> Self {
        BinaryQuartic::from_ints([0; 5])
    }

    /// `∏ (s − rᵢ t)`
    pub fn from_roots(roots: &[Rat; 4]) -> Self {
        let mut form = vec![Rat::one()];
        for r in roots {
            form = mul_forms(&form, &[Rat::one(), -r]);
        }
        BinaryQuartic::from_vec(form)
    }

    fn from_vec(v: Vec<Rat>) -> Self {
        assert_eq!(v.len(), 5);
        let mut it = v.into_iter();
        BinaryQuartic {
            c: std::array::from_fn(|_| it.next().unwrap()),
        }
    }

    pub fn coeffs(&self) -> &[Rat; 5] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rat::is_zero)
    }

    pub fn scale(&self, k: &Rat) -> BinaryQuartic {
        BinaryQuartic {
            c: std::array::from_fn(|i| &self.c[i] * k),
        }
    }

    /// Whether the two forms differ by a nonzero scalar.
    pub fn proportional(&self, other: &BinaryQuartic) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let k = (0..5).find(|&i| !self.c[i].is_zero()).unwrap();
        if other.c[k].is_zero() {
            return false;
        }
        let ratio = &other.c[k] / &self.c[k];
        self.scale(&ratio) == *other
    }

    /// Binomially weighted coefficients `aᵢ = cᵢ / C(4,i)`.
    pub fn weighted(&self) -> [Rat; 5] {
        std::array::from_fn(|i| &self.c[i] / Rat::from_int(BINOM4[i]))
    }

    pub fn eval(&self, s: &Rat, t: &Rat) -> Rat {
        (0..5)
            .map(|k| &self.c[k] * s.pow(4 - k as i32) * t.pow(k as i32))
            .sum()
    }

    pub fn invariants(&self) -> InvariantTriple {
        let [a0, a1, a2, a3, a4] = self.weighted();
        let i = &a0 * &a4 - Rat::from_int(4) * &a1 * &a3 + Rat::from_int(3) * &a2 * &a2;
        let j = &a0 * &a2 * &a4 + Rat::from_int(2) * &a1 * &a2 * &a3
            - &a2 * &a2 * &a2
            - &a0 * &a3 * &a3
            - &a1 * &a1 * &a4;
        let delta = i.pow(3) - Rat::from_int(27) * &j * &j;
        InvariantTriple { i, j, delta }
    }

    /// `1728·I³/Δ`, or ∞ when Δ = 0 and I ≠ 0.
    pub fn j_invariant(&self) -> Result<ProjValue> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let inv = self.invariants();
        if inv.i.is_zero() && inv.j.is_zero() {
            return Err(Error::UndefinedJ);
        }
        if inv.delta.is_zero() {
            return Ok(ProjValue::Infinity);
        }
        Ok(ProjValue::Finite(
            Rat::from_int(1728) * inv.i.pow(3) / inv.delta,
        ))
    }

    /// `f((s,t)·M)`, i.e. `s ↦ m00·s + m10·t`, `t ↦ m01·s + m11·t`.
    pub fn gl2_substitute(&self, m: &[[Rat; 2]; 2]) -> Result<BinaryQuartic> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            return Err(Error::SingularSubstitution);
        }
        let s_img = [m[0][0].clone(), m[1][0].clone()];
        let t_img = [m[0][1].clone(), m[1][1].clone()];
        let mut acc = vec![Rat::zero(); 5];
        for k in 0..5 {
            if self.c[k].is_zero() {
                continue;
            }
            let mut term = vec![self.c[k].clone()];
            for _ in 0..(4 - k) {
                term = mul_forms(&term, &s_img);
            }
            for _ in 0..k {
                term = mul_forms(&term, &t_img);
            }
            for (a, b) in acc.iter_mut().zip(term) {
                *a += b;
            }
        }
        Ok(BinaryQuartic::from_vec(acc))
    }

    /// Multiplicity of the root (s:t) = (1:0), i.e. the number of leading
    /// vanishing coefficients.
    pub fn infinity_multiplicity(&self) -> usize {
        self.c.iter().take_while(|c| c.is_zero()).count().min(4)
    }

    /// `f(x, 1)` as a polynomial in `x = s/t` (degree `4 − mult(1:0)`).
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new((0..5).map(|i| self.c[4 - i].clone()).collect())
    }

    /// Root multiplicities decided exactly by squarefree decomposition of the
    /// dehomogenized form, plus the root at (1:0).
    pub fn root_type(&self) -> RootType {
        if self.is_zero() {
            return RootType::zero_form();
        }
        let mut parts = Vec::new();
        let inf = self.infinity_multiplicity();
        if inf > 0 {
            parts.push(inf);
        }
        for (g, mult) in self.dehomogenize().squarefree_decomposition() {
            for _ in 0..g.deg0() {
                parts.push(mult);
            }
        }
        RootType::from_parts(parts)
    }
}

/// Product of binary forms given by coefficient vectors in `s^{d-k} t^k`.
fn mul_forms(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl fmt::Debug for BinaryQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BinaryQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const MONO: [&str; 5] = ["s^4", "s^3 t", "s^2 t^2", "s t^3", "t^4"];
        let terms: Vec<String> = (0..5)
            .filter(|&k| !self.c[k].is_zero())
            .map(|k| format!("({}) {}", self.c[k], MONO[k]))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    fn bq(c: [i64; 5]) -> BinaryQuartic {
        BinaryQuartic::from_ints(c)
    }

    #[test]
    fn invariants_of_fermat_quartic() {
        let inv = bq([1, 0, 0, 0, 1]).invariants();
        assert_eq!((inv.i, inv.j, inv.delta), (qi(1), qi(0), qi(1)));
    }

    #[test]
    fn invariants_with_weighted_coefficient() {
        // s^4 - s t^3: a3 = -1/4
        let inv = bq([1, 0, 0, -1, 0]).invariants();
        assert_eq!(inv.i, qi(0));
        assert_eq!(inv.j, q(-1, 16));
        assert_eq!(inv.delta, q(-27, 256));
    }

    #[test]
    fn zero_form() {
        let inv = BinaryQuartic::zero().invariants();
        assert!(inv.i.is_zero() && inv.j.is_zero() && inv.delta.is_zero());
        assert_eq!(BinaryQuartic::zero().j_invariant(), Err(Error::ZeroForm));
        assert!(BinaryQuartic::zero().root_type().is_zero_form());
    }

    #[test]
    fn j_values() {
        assert_eq!(bq([1, 0, 0, 0, 1]).j_invariant(), Ok(qi(1728).into()));
        // st(s-t)(s-2t) = s^3 t - 3 s^2 t^2 + 2 s t^3
        let f = bq([0, 1, -3, 2, 0]);
        assert_eq!(f.j_invariant(), Ok(qi(1728).into()));
        assert_eq!(bq([0, 1, 0, 0, 0]).j_invariant(), Err(Error::UndefinedJ));
        // a double root with I != 0 gives infinity
        assert_eq!(bq([0, 0, 1, 3, 2]).j_invariant(), Ok(ProjValue::Infinity));
    }

    #[test]
    fn substitution_examples() {
        let f = bq([3, -1, 4, 1, -5]);
        let id = [[qi(1), qi(0)], [qi(0), qi(1)]];
        assert_eq!(f.gl2_substitute(&id).unwrap(), f);
        let swap = [[qi(0), qi(1)], [qi(1), qi(0)]];
        let fermat = bq([1, 0, 0, 0, 1]);
        assert_eq!(fermat.gl2_substitute(&swap).unwrap(), fermat);
        let sing = [[qi(1), qi(2)], [qi(2), qi(4)]];
        assert_eq!(f.gl2_substitute(&sing), Err(Error::SingularSubstitution));
    }

    #[test]
    fn substitution_scales_invariants() {
        let f = bq([0, 1, -3, 2, 0]);
        let m = [[qi(2), qi(0)], [qi(0), qi(1)]];
        let g = f.gl2_substitute(&m).unwrap();
        let (a, b) = (f.invariants(), g.invariants());
        assert_eq!(b.i, &a.i * qi(16));
        assert_eq!(b.j, &a.j * qi(64));
        assert_eq!(g.j_invariant(), Ok(qi(1728).into()));
    }

    #[test]
    fn root_types() {
        assert_eq!(bq([0, 1, -3, 2, 0]).root_type().to_string(), "1+1+1+1");
        // -1/4 t^2 (s+t)(s+2t)
        let node = BinaryQuartic::new([qi(0), qi(0), q(-1, 4), q(-3, 4), q(-1, 2)]);
        assert_eq!(node.root_type().to_string(), "2+1+1");
        assert_eq!(bq([0, 0, 1, 0, 0]).root_type().to_string(), "2+2");
        assert_eq!(bq([0, 1, 0, 0, 0]).root_type().to_string(), "3+1");
        assert_eq!(bq([0, 0, 0, 0, 1]).root_type().to_string(), "4");
        assert_eq!(bq([1, 0, 0, 0, 1]).root_type().to_string(), "1+1+1+1");
    }

    #[test]
    fn from_roots_matches_expansion() {
        let f = BinaryQuartic::from_roots(&[qi(0), qi(1), qi(2), qi(3)]);
        // s (s-t)(s-2t)(s-3t) = s^4 - 6 s^3 t + 11 s^2 t^2 - 6 s t^3
        assert_eq!(f, bq([1, -6, 11, -6, 0]));
    }
}
