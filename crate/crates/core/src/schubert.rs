//! Schubert classes on Gr(2, n): Pieri multiplication by σ₁ and the degree
//! pairing.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::moduli::fiber_structure;
use crate::quartic::ProjValue;

/// `σ_{a,b}` on Gr(2, n), `n − 2 ≥ a ≥ b ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition2 {
    a: usize,
    b: usize,
    n: usize,
}

impl Partition2 {
    pub fn new(a: usize, b: usize, n: usize) -> Result<Self> {
        if n < 2 || a > n - 2 || b > a {
            return Err(Error::InvalidPartition { a, b, n });
        }
        Ok(Partition2 { a, b, n })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codimension(&self) -> usize {
        self.a + self.b
    }

    /// The class of a point, `σ_{n−2,n−2}`.
    pub fn point(n: usize) -> Result<Self> {
        Partition2::new(n.saturating_sub(2), n.saturating_sub(2), n)
    }

    pub fn sigma1(n: usize) -> Result<Self> {
        Partition2::new(1, 0, n)
    }
}

impl fmt::Display for Partition2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

/// An integer combination of Schubert classes on one Gr(2, n), all of one
/// codimension. JSON: `{"n": n, "terms": {"a,b": coeff, ...}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSum {
    n: usize,
    terms: BTreeMap<(usize, usize), i64>,
}

impl ClassSum {
    pub fn zero(n: usize) -> Self {
        ClassSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(p: Partition2, coeff: i64) -> Self {
        let mut s = ClassSum::zero(p.n);
        if coeff != 0 {
            s.terms.insert((p.a, p.b), coeff);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: usize, b: usize) -> i64 {
        self.terms.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Partition2, i64)> + '_ {
        self.terms.iter().map(move |(&(a, b), &c)| (Partition2 { a, b, n: self.n }, c))
    }

    pub fn codimension(&self) -> Option<usize> {
        self.terms.keys().next().map(|(a, b)| a + b)
    }

    pub fn add(&self, other: &ClassSum) -> Result<ClassSum> {
        if self.n != other.n {
            return Err(Error::MixedAmbient(self.n, other.n));
        }
        if let (Some(x), Some(y)) = (self.codimension(), other.codimension()) {
            if x != y {
                return Err(Error::InvalidArgument(format!(
                    "cannot add classes of codimension {x} and {y}"
                )));
            }
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            let e = out.terms.entry(*k).or_insert(0);
            *e += c;
            if *e == 0 {
                out.terms.remove(k);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> ClassSum {
        if k == 0 {
            return ClassSum::zero(self.n);
        }
        ClassSum {
            n: self.n,
            terms: self.terms.iter().map(|(p, c)| (*p, c * k)).collect(),
        }
    }

    /// `σ₁ · self`, extended linearly.
    pub fn times_sigma1(&self) -> ClassSum {
        let mut out = ClassSum::zero(self.n);
        for (p, c) in self.terms() {
            out = out
                .add(&pieri_sigma1(&p).scale(c))
                .expect("same ambient and codimension");
        }
        out
    }
}

impl fmt::Display for ClassSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), &c) in self.terms.iter().rev() {
            let name = if (a, b) == (1, 0) {
                "σ1".to_string()
            } else {
                format!("σ{a},{b}")
            };
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for ClassSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a BTreeMap<(usize, usize), i64>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for ((a, b), c) in self.0 {
                    m.serialize_entry(&format!("{a},{b}"), c)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("terms", &Terms(&self.terms))?;
        m.end()
    }
}

/// One-box additions to `(a, b)` inside the `2 × (n−2)` rectangle.
pub fn pieri_sigma1(c: &Partition2) -> ClassSum {
    let mut out = ClassSum::zero(c.n);
    if c.a < c.n - 2 {
        out.terms.insert((c.a + 1, c.b), 1);
    }
    if c.b < c.a {
        out.terms.insert((c.a, c.b + 1), 1);
    }
    out
}

/// Coefficient of the point class; every term must be of top codimension.
pub fn degree(c: &ClassSum) -> Result<i64> {
    let top = 2 * (c.n - 2);
    if c.terms.keys().any(|(a, b)| a + b != top) {
        return Err(Error::NotTopDegree);
    }
    Ok(c.coeff(c.n - 2, c.n - 2))
}

/// Degree of Gr(2, n) in the Plücker embedding, by iterating Pieri from the
/// fundamental class.
pub fn plucker_degree(n: usize) -> Result<i64> {
    let mut c = ClassSum::single(Partition2::new(0, 0, n)?, 1);
    for _ in 0..2 * (n - 2) {
        c = c.times_sigma1();
    }
    degree(&c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorClassReport {
    pub a: ProjValue,
    pub slice_count: i64,
    /// `σ₁ · σ_{8,7}` on Gr(2, 10).
    pub pairing: i64,
    pub multiplicity: u32,
    pub fiber_class: ClassSum,
    pub reduced_class: ClassSum,
}

/// Divisor classes on Gr(2, 10) from an intersection count with the
/// complementary curve class `σ_{8,7}`: the class is `(count / pairing)·σ₁`,
/// and the reduced class divides by the fiber multiplicity over `a`.
pub fn divisor_class_report(slice_count: i64, a: &ProjValue) -> Result<DivisorClassReport> {
    let n = 10;
    let curve = Partition2::new(8, 7, n)?;
    let pairing = degree(&pieri_sigma1(&curve))?;
    if pairing == 0 || slice_count % pairing != 0 {
        return Err(Error::InvalidArgument(format!(
            "slice count {slice_count} is not a multiple of the pairing {pairing}"
        )));
    }
    let coeff = slice_count / pairing;
    let multiplicity = fiber_structure(a).multiplicity;
    if coeff % multiplicity as i64 != 0 {
        return Err(Error::NonDivisibleMultiplicity {
            multiplicity,
            count: coeff,
        });
    }
    let sigma1 = Partition2::sigma1(n)?;
    Ok(DivisorClassReport {
        a: a.clone(),
        slice_count,
        pairing,
        multiplicity,
        fiber_class: ClassSum::single(sigma1, coeff),
        reduced_class: ClassSum::single(sigma1, coeff / multiplicity as i64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    fn p(a: usize, b: usize, n: usize) -> Partition2 {
        Partition2::new(a, b, n).unwrap()
    }

    #[test]
    fn partition_bounds() {
        assert!(Partition2::new(9, 0, 10).is_err());
        assert!(Partition2::new(2, 3, 10).is_err());
        assert!(Partition2::new(8, 8, 10).is_ok());
    }

    #[test]
    fn pieri_examples() {
        assert_eq!(pieri_sigma1(&p(8, 7, 10)), ClassSum::single(p(8, 8, 10), 1));
        let s = pieri_sigma1(&p(1, 0, 4));
        assert_eq!(s.coeff(2, 0), 1);
        assert_eq!(s.coeff(1, 1), 1);
        assert_eq!(s.terms().count(), 2);
        assert!(pieri_sigma1(&p(8, 8, 10)).is_zero());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&ClassSum::single(p(8, 8, 10), 1)), Ok(1));
        assert_eq!(degree(&pieri_sigma1(&p(8, 7, 10))), Ok(1));
        assert_eq!(degree(&ClassSum::single(p(8, 8, 10), 3)), Ok(3));
        assert_eq!(degree(&ClassSum::single(p(8, 7, 10), 1)), Err(Error::NotTopDegree));
    }

    #[test]
    fn mixed_ambient_rejected() {
        let a = ClassSum::single(p(1, 0, 4), 1);
        let b = ClassSum::single(p(1, 0, 5), 1);
        assert_eq!(a.add(&b), Err(Error::MixedAmbient(4, 5)));
    }

    #[test]
    fn plucker_degrees_are_catalan() {
        // deg Gr(2,n) = Catalan(n-2)
        let catalan = [1i64, 1, 2, 5, 14, 42, 132, 429, 1430];
        for n in 2..=10 {
            assert_eq!(plucker_degree(n).unwrap(), catalan[n - 2], "n = {n}");
        }
    }

    #[test]
    fn class_report() {
        let r = divisor_class_report(12, &ProjValue::Finite(qi(5))).unwrap();
        assert_eq!(r.fiber_class.to_string(), "12σ1");
        assert_eq!(r.reduced_class.to_string(), "12σ1");
        let r = divisor_class_report(12, &ProjValue::Finite(qi(1728))).unwrap();
        assert_eq!(r.reduced_class.to_string(), "6σ1");
        let r = divisor_class_report(12, &ProjValue::Finite(qi(0))).unwrap();
        assert_eq!(r.reduced_class.to_string(), "4σ1");
        assert_eq!(
            divisor_class_report(10, &ProjValue::Finite(qi(0))),
            Err(Error::NonDivisibleMultiplicity {
                multiplicity: 3,
                count: 10
            })
        );
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&ClassSum::single(p(8, 8, 10), 1)).unwrap();
        assert_eq!(s, r#"{"n":10,"terms":{"8,8":1}}"#);
    }
}
