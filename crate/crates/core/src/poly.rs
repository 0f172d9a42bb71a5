//! Dense univariate polynomials over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rat::Rat;

/// Coefficients in ascending degree. The last stored coefficient is nonzero;
/// the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&v| Rat::from_int(v)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        UniPoly::new(v)
    }

    pub fn x() -> Self {
        UniPoly::monomial(Rat::one(), 1)
    }

    /// `x - r`
    pub fn linear_root(r: &Rat) -> Self {
        UniPoly::new(vec![-r, Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; convenient for bounds.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation in any ring that contains ℚ.
    pub fn eval_with<T, F>(&self, x: &T, lift: F) -> T
    where
        T: Clone + Add<Output = T> + Mul<Output = T>,
        F: Fn(&Rat) -> T,
    {
        let mut it = self.coeffs.iter().rev();
        let Some(first) = it.next() else {
            return lift(&Rat::zero());
        };
        let mut acc = lift(first);
        for c in it {
            acc = acc * x.clone() + lift(c);
        }
        acc
    }

    /// The polynomial of degree < `points.len()` through the given points
    /// (Lagrange form). Abscissae must be distinct.
    pub fn interpolate(points: &[(Rat, Rat)]) -> UniPoly {
        let mut out = UniPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = UniPoly::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let scale = (xi - xj).recip().expect("distinct abscissae");
                    basis = &basis * &UniPoly::linear_root(xj).scale(&scale);
                }
            }
            out = &out + &basis;
        }
        out
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UniPoly {
        match self.coeffs.last() {
            None => UniPoly::zero(),
            Some(lc) => {
                let inv = lc.recip().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `p(q(x))`
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// `x^n p(1/x)`; requires `n >= deg p`.
    pub fn reversed(&self, n: usize) -> UniPoly {
        assert!(self.deg0() <= n, "reversal length below degree");
        let mut v = vec![Rat::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[n - k] = c.clone();
        }
        UniPoly::new(v)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = d.leading().recip().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] * &lc_inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                r[idx] = &r[idx] - &(&f * dc);
            }
            quot[k - dd] = f;
        }
        r.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Division known to be exact; panics otherwise.
    pub fn exact_div(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero when both inputs are zero), via the primitive
    /// remainder sequence over ℤ.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = IntPoly::primitive_of(self);
        let mut b = IntPoly::primitive_of(other);
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.to_rat().monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
        let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).is_constant(),
        }
    }

    /// Yun's algorithm. Returns `(factor, multiplicity)` pairs with monic,
    /// squarefree, pairwise coprime factors of positive degree, so that
    /// `self = lc · ∏ factor^multiplicity`.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.deg0() == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0);
        let c = fp.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            b = b.exact_div(&a);
            let c_next = d.exact_div(&a);
            d = &c_next - &b.derivative();
            if !a.is_constant() {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.deg0() == 0 {
            return self.monic();
        }
        self.exact_div(&self.gcd(&self.derivative())).monic()
    }

    /// Multiplicity of `r` as a root (0 if not a root). Zero polynomial → None.
    pub fn root_multiplicity(&self, r: &Rat) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = UniPoly::linear_root(r);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                return Some(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Multiplicity of the (nonconstant) factor `m` in `self`.
    pub fn factor_multiplicity(&self, m: &UniPoly) -> Option<usize> {
        if self.is_zero() || m.is_constant() {
            return None;
        }
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, rem) = p.div_rem(m);
            if !rem.is_zero() {
                return Some(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Distinct rational roots, ascending: the certified roots that were
    /// identified exactly.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.deg0() == 0 {
            return Vec::new();
        }
        let mut roots: Vec<Rat> = crate::roots::complex_roots(&self.squarefree_part(), crate::roots::DEFAULT_PRECISION)
            .expect("squarefree rational polynomial roots certify")
            .into_iter()
            .filter_map(|z| z.exact)
            .collect();
        roots.sort();
        roots
    }

    /// The rational root of `self` inside the closed disk, if any. When `r` is
    /// a root of the primitive integer form with leading coefficient `c`, the
    /// product `c·r` is an integer, so only a few candidates are tested.
    pub fn rational_root_near(&self, center_re: &Rat, radius: &Rat) -> Option<Rat> {
        let lead = Rat::from_bigint(IntPoly::primitive_of(self).c.last()?.abs());
        let lo = (center_re - radius) * &lead;
        let hi = (center_re + radius) * &lead;
        let mut k = floor_big(&lo);
        while Rat::from_bigint(k.clone()) <= hi {
            let r = Rat::from_bigint(k.clone()) / &lead;
            if self.eval(&r).is_zero() {
                return Some(r);
            }
            k += 1;
        }
        None
    }
}

fn floor_big(x: &Rat) -> BigInt {
    num_integer::Integer::div_floor(x.numer(), x.denom())
}

/// Integer polynomial used only inside the gcd.
struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    fn primitive_of(p: &UniPoly) -> IntPoly {
        let l = p
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let c = p
            .coeffs
            .iter()
            .map(|r| r.numer() * (&l / r.denom()))
            .collect();
        IntPoly { c }.primitive()
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn trim(mut self) -> Self {
        while self.c.last().is_some_and(Zero::is_zero) {
            self.c.pop();
        }
        self
    }

    fn primitive(self) -> IntPoly {
        let mut s = self.trim();
        if s.c.is_empty() {
            return s;
        }
        let g = s.c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let neg = s.c.last().unwrap().is_negative();
        for x in s.c.iter_mut() {
            *x = &*x / &g;
            if neg {
                *x = -&*x;
            }
        }
        s
    }

    fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree();
        let lb = b.c.last().unwrap().clone();
        let mut r = self.c.clone();
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1;
            let lr = r[k].clone();
            for x in r.iter_mut() {
                *x = &*x * &lb;
            }
            for (j, bc) in b.c.iter().enumerate() {
                let idx = k - db + j;
                r[idx] = &r[idx] - &lr * bc;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        IntPoly { c: r }
    }

    fn to_rat(&self) -> UniPoly {
        UniPoly::new(self.c.iter().cloned().map(Rat::from_bigint).collect())
    }
}

impl<'a, 'b> Add<&'b UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &'b UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, 'b> Sub<&'b UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &'b UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, 'b> Mul<&'b UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &'b UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        &self + &rhs
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        &self - &rhs
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        &self * &rhs
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<'a> Neg for &'a UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(UniPoly::new(Vec::<Rat>::deserialize(deserializer)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(UniPoly::zero().degree(), None);
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, -1, 4, 1, -5, 9]);
        let d = p(&[2, 0, 7]);
        let (qq, r) = a.div_rem(&d);
        assert_eq!(&(&qq * &d) + &r, a);
        assert!(r.deg0() < 2);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let common = p(&[-2, 0, 1]);
        let a = &common * &p(&[1, 1]);
        let b = &common * &p(&[5, 0, 3]);
        assert_eq!(a.gcd(&b), common);
        assert_eq!(p(&[1, 1]).gcd(&p(&[1, 2])), UniPoly::one());
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(&[1, 0, 1]);
        let b = p(&[-1, 1, 0, 2]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
        assert_eq!(g, UniPoly::one());
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^3 (x+2)^2 (x^2+1)
        let f = &(&p(&[-1, 1]).pow(3) * &p(&[2, 1]).pow(2)) * &p(&[1, 0, 1]).scale(&qi(5));
        let dec = f.squarefree_decomposition();
        assert_eq!(
            dec,
            vec![(p(&[1, 0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]
        );
        assert!(!f.is_squarefree());
        assert!(p(&[1, 0, 1]).is_squarefree());
    }

    #[test]
    fn rational_roots_found() {
        // (2x-1)(x+3)(x^2-2)
        let f = &(&p(&[-1, 2]) * &p(&[3, 1])) * &p(&[-2, 0, 1]);
        assert_eq!(f.rational_roots(), vec![qi(-3), q(1, 2)]);
        assert_eq!(f.root_multiplicity(&q(1, 2)), Some(1));
        assert_eq!(p(&[0, 0, 1]).rational_roots(), vec![qi(0)]);
        // large coefficients: (123456789 x - 987654321)(x^2 + 7)
        let big = &p(&[-987654321, 123456789]) * &p(&[7, 0, 1]);
        assert_eq!(big.rational_roots(), vec![q(987654321, 123456789)]);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[3, 0, -2, 1]);
        let pts: Vec<_> = (0..4).map(|x| (qi(x), f.eval(&qi(x)))).collect();
        assert_eq!(UniPoly::interpolate(&pts), f);
    }

    #[test]
    fn reversal_and_compose() {
        let f = p(&[1, 2, 3]);
        assert_eq!(f.reversed(4), p(&[0, 0, 3, 2, 1]));
        assert_eq!(f.compose(&p(&[1, 1])), p(&[6, 8, 3]));
    }
}
