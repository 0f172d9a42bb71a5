//! Pencils of quadrics, their discriminant quartic, and orbit classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, bilinear, bilinear_mod, split_eliminate, split_zero_locus, Matrix};
use crate::poly::UniPoly;
use crate::quartic::{BinaryQuartic, ProjValue, RootType};
use crate::rat::Rat;
use crate::roots::{complex_roots, CRoot, DEFAULT_PRECISION};

/// Symmetric 4×4 rational matrix; the quadric `Σ Bᵢⱼ xᵢ xⱼ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymMat4(Matrix<Rat>);

impl SymMat4 {
    pub fn new(m: Matrix<Rat>) -> Result<Self> {
        if m.nrows() != 4 || m.ncols() != 4 {
            return Err(Error::Shape {
                expected: "4x4",
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymMat4(m))
    }

    pub fn from_ints(rows: [[i64; 4]; 4]) -> Result<Self> {
        SymMat4::new(Matrix::from_fn(4, 4, |i, j| Rat::from_int(rows[i][j])))
    }

    pub fn diagonal(d: [Rat; 4]) -> Self {
        SymMat4(Matrix::from_fn(4, 4, |i, j| {
            if i == j {
                d[i].clone()
            } else {
                Rat::zero()
            }
        }))
    }

    /// Builds the matrix of `Σ c·xᵢxⱼ` from monomial terms `(i, j, c)`;
    /// off-diagonal monomials split their coefficient over both entries.
    pub fn from_monomials(terms: &[(usize, usize, Rat)]) -> Self {
        let mut m = Matrix::<Rat>::zeros(4, 4);
        for (i, j, c) in terms {
            if i == j {
                let v = m.get(*i, *i) + c;
                m.set(*i, *i, v);
            } else {
                let half = c / Rat::from_int(2);
                let v = m.get(*i, *j) + &half;
                m.set(*i, *j, v.clone());
                m.set(*j, *i, v);
            }
        }
        SymMat4(m)
    }

    pub fn zero() -> Self {
        SymMat4(Matrix::zeros(4, 4))
    }

    pub fn matrix(&self) -> &Matrix<Rat> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        self.0.get(i, j)
    }

    /// Upper-triangular entries, the coordinates in the P⁹ of quadrics.
    pub fn upper(&self) -> [Rat; 10] {
        let mut out: [Rat; 10] = Default::default();
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                out[k] = self.0.get(i, j).clone();
                k += 1;
            }
        }
        out
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        bilinear(&self.0, v, v)
    }

    pub fn det(&self) -> Rat {
        self.0.det()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.0)
    }

    pub fn lin_comb(a: &Rat, p: &SymMat4, b: &Rat, q: &SymMat4) -> SymMat4 {
        SymMat4(p.0.scale(a).add(&q.0.scale(b)))
    }

    pub fn congruence(&self, g: &Matrix<Rat>) -> SymMat4 {
        SymMat4(self.0.congruence(g))
    }
}

impl Serialize for SymMat4 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMat4 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Rat>>::deserialize(d)?;
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(serde::de::Error::custom("expected a 4x4 matrix"));
        }
        SymMat4::new(Matrix::from_rows(rows)).map_err(serde::de::Error::custom)
    }
}

/// An ordered basis `(Q0, Q1)` of a 2-plane of quadrics.
/// JSON: `{"Q0": [[..]], "Q1": [[..]]}` with `"num/den"` entries.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Pencil {
    #[serde(rename = "Q0")]
    q0: SymMat4,
    #[serde(rename = "Q1")]
    q1: SymMat4,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PencilRepr {
    #[serde(rename = "Q0")]
    q0: SymMat4,
    #[serde(rename = "Q1")]
    q1: SymMat4,
}

impl<'de> Deserialize<'de> for Pencil {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PencilRepr::deserialize(d)?;
        Pencil::new(r.q0, r.q1).map_err(serde::de::Error::custom)
    }
}

pub type Mat2 = [[Rat; 2]; 2];

pub fn mat2_identity() -> Mat2 {
    [[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j]))
}

pub fn mat2_det(a: &Mat2) -> Rat {
    &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
}

impl Pencil {
    pub fn new(q0: SymMat4, q1: SymMat4) -> Result<Self> {
        let rows = Matrix::from_rows(vec![q0.upper().to_vec(), q1.upper().to_vec()]);
        if linalg::rank(&rows) < 2 {
            return Err(Error::DependentPencil);
        }
        Ok(Pencil { q0, q1 })
    }

    pub fn q0(&self) -> &SymMat4 {
        &self.q0
    }

    pub fn q1(&self) -> &SymMat4 {
        &self.q1
    }

    /// `s·Q0 + t·Q1`
    pub fn member(&self, s: &Rat, t: &Rat) -> SymMat4 {
        SymMat4::lin_comb(s, &self.q0, t, &self.q1)
    }

    /// `det(s·Q0 + t·Q1)`, expanded exactly.
    pub fn discriminant_quartic(&self) -> BinaryQuartic {
        det_quartic(self.q0.matrix(), self.q1.matrix())
    }

    /// `⟨g·Q0·gᵀ, g·Q1·gᵀ⟩`
    pub fn congruence_act(&self, g: &Matrix<Rat>) -> Result<Pencil> {
        if g.nrows() != 4 || g.ncols() != 4 {
            return Err(Error::Shape {
                expected: "4x4",
                rows: g.nrows(),
                cols: g.ncols(),
            });
        }
        if g.det().is_zero() {
            return Err(Error::SingularGroupElement);
        }
        Ok(Pencil {
            q0: self.q0.congruence(g),
            q1: self.q1.congruence(g),
        })
    }

    /// New ordered basis `(m00·Q0 + m01·Q1, m10·Q0 + m11·Q1)` of the same plane.
    pub fn change_basis(&self, m: &Mat2) -> Result<Pencil> {
        if mat2_det(m).is_zero() {
            return Err(Error::SingularSubstitution);
        }
        Ok(Pencil {
            q0: self.member(&m[0][0], &m[0][1]),
            q1: self.member(&m[1][0], &m[1][1]),
        })
    }

    pub fn singular_members(&self) -> Result<Vec<SingularMember>> {
        self.singular_members_with(DEFAULT_PRECISION)
    }

    /// Roots of the discriminant with the rank of the corresponding member
    /// and, for rank 3, whether its vertex lies on the base locus. Ranks are
    /// exact: at irrational roots they are computed over ℚ[u]/(m).
    pub fn singular_members_with(&self, precision_bits: u32) -> Result<Vec<SingularMember>> {
        let f = self.discriminant_quartic();
        if f.is_zero() {
            return Err(Error::LineInD);
        }
        let mut out = Vec::new();
        let inf = f.infinity_multiplicity();
        if inf > 0 {
            out.push(self.rational_member(Rat::one(), Rat::zero(), inf));
        }
        for (factor, mult) in f.dehomogenize().squarefree_decomposition() {
            if factor.deg0() == 1 {
                let x = -(factor.coeff(0) / factor.coeff(1));
                out.push(self.rational_member(x, Rat::one(), mult));
            } else {
                out.extend(self.algebraic_members(&factor, mult, precision_bits)?);
            }
        }
        out.sort_by(|a, b| a.root.sort_key().cmp(&b.root.sort_key()));
        Ok(out)
    }

    fn rational_member(&self, s: Rat, t: Rat, multiplicity: usize) -> SingularMember {
        let m = self.member(&s, &t);
        let rank = m.rank();
        let (vertex, on_base) = if rank == 3 {
            let v = linalg::kernel(m.matrix()).remove(0);
            let on = self.q0.eval(&v).is_zero() && self.q1.eval(&v).is_zero();
            (Some(normalize_point(v)), on)
        } else {
            (None, false)
        };
        SingularMember {
            root: RootPoint::Rational { s, t },
            multiplicity,
            rank,
            vertex_on_base_locus: on_base,
            vertex,
        }
    }

    fn algebraic_members(
        &self,
        factor: &UniPoly,
        multiplicity: usize,
        bits: u32,
    ) -> Result<Vec<SingularMember>> {
        // u·Q0 + Q1 over Q[u]/(factor)
        let mat = Matrix::from_fn(4, 4, |i, j| {
            UniPoly::new(vec![self.q1.get(i, j).clone(), self.q0.get(i, j).clone()])
        });
        let mut pieces: Vec<(UniPoly, usize, bool)> = Vec::new();
        for piece in split_eliminate(&mat, factor) {
            if piece.rank != 3 {
                pieces.push((piece.modulus, piece.rank, false));
                continue;
            }
            let v = &piece.kernel[0];
            let e0 = bilinear_mod(self.q0.matrix(), v, v, &piece.modulus);
            let (zero0, nonzero0) = split_zero_locus(&e0, &piece.modulus);
            if !nonzero0.is_constant() {
                pieces.push((nonzero0, 3, false));
            }
            if zero0.is_constant() {
                continue;
            }
            let e1 = bilinear_mod(self.q1.matrix(), v, v, &zero0);
            let (zero1, nonzero1) = split_zero_locus(&e1, &zero0);
            if !nonzero1.is_constant() {
                pieces.push((nonzero1, 3, false));
            }
            if !zero1.is_constant() {
                pieces.push((zero1, 3, true));
            }
        }
        let mut out = Vec::new();
        for (modulus, rank, on_base) in pieces {
            if modulus.deg0() == 1 {
                let x = -(modulus.coeff(0) / modulus.coeff(1));
                out.push(self.rational_member(x, Rat::one(), multiplicity));
                continue;
            }
            for root in complex_roots(&modulus, bits)? {
                let mut root = root;
                root.multiplicity = multiplicity;
                out.push(SingularMember {
                    root: RootPoint::Algebraic {
                        factor: modulus.clone(),
                        approximation: root,
                    },
                    multiplicity,
                    rank,
                    vertex_on_base_locus: on_base,
                    vertex: None,
                });
            }
        }
        Ok(out)
    }

    pub fn classify(&self) -> Result<OrbitClass> {
        classify(self)
    }

    pub fn infinitesimal_stabilizer_dim(&self) -> StabilizerReport {
        infinitesimal_stabilizer_dim(self)
    }
}

/// `det(s·A + t·B)` for 4×4 matrices, as a binary quartic in `(s, t)`.
pub fn det_quartic(a: &Matrix<Rat>, b: &Matrix<Rat>) -> BinaryQuartic {
    let m = Matrix::from_fn(4, 4, |i, j| UniPoly::new(vec![a.get(i, j).clone(), b.get(i, j).clone()]));
    let d = m.det();
    BinaryQuartic::new(std::array::from_fn(|k| d.coeff(k)))
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_point(v: Vec<Rat>) -> Vec<Rat> {
    match v.iter().find(|x| !x.is_zero()).cloned() {
        Some(lead) => v.into_iter().map(|x| x / &lead).collect(),
        None => v,
    }
}

/// A root of the discriminant on P¹, in coordinates `(s:t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RootPoint {
    Rational { s: Rat, t: Rat },
    /// A root of `factor(x)` with `x = s/t`, located by a certified disk.
    Algebraic {
        factor: UniPoly,
        approximation: CRoot,
    },
}

impl RootPoint {
    /// `(is_infinite, re, im)` for deterministic ordering.
    fn sort_key(&self) -> (bool, Rat, Rat) {
        match self {
            RootPoint::Rational { s, t } if t.is_zero() => (true, s.clone(), Rat::zero()),
            RootPoint::Rational { s, t } => (false, s / t, Rat::zero()),
            RootPoint::Algebraic { approximation, .. } => (
                false,
                approximation.approximation.re.clone(),
                approximation.approximation.im.clone(),
            ),
        }
    }

    pub fn as_rational(&self) -> Option<(&Rat, &Rat)> {
        match self {
            RootPoint::Rational { s, t } => Some((s, t)),
            RootPoint::Algebraic { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularMember {
    pub root: RootPoint,
    pub multiplicity: usize,
    pub rank: usize,
    /// Meaningful only when `rank == 3`.
    pub vertex_on_base_locus: bool,
    /// Rational vertex, when the root is rational and the rank is 3.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<Vec<Rat>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OrbitTag {
    SmoothFiber,
    NodalStratum,
    DeeperStratum,
    #[serde(rename = "LineInD")]
    LineInD,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitClass {
    pub tag: OrbitTag,
    /// Present iff `tag == SmoothFiber`.
    pub j: Option<ProjValue>,
    pub root_type: RootType,
    pub diagnostics: Vec<SingularMember>,
}

impl OrbitClass {
    /// The orbit-level data, without diagnostics (which depend on the basis).
    pub fn signature(&self) -> (OrbitTag, RootType, Option<ProjValue>) {
        (self.tag, self.root_type.clone(), self.j.clone())
    }
}

pub fn classify(p: &Pencil) -> Result<OrbitClass> {
    classify_with(p, DEFAULT_PRECISION)
}

/// [`classify`] with the root-isolation precision for the diagnostics.
pub fn classify_with(p: &Pencil, precision_bits: u32) -> Result<OrbitClass> {
    let f = p.discriminant_quartic();
    if f.is_zero() {
        return Ok(OrbitClass {
            tag: OrbitTag::LineInD,
            j: None,
            root_type: RootType::zero_form(),
            diagnostics: Vec::new(),
        });
    }
    let root_type = f.root_type();
    let diagnostics = p.singular_members_with(precision_bits)?;
    if root_type.is_squarefree() {
        let j = f.j_invariant()?;
        return Ok(OrbitClass {
            tag: OrbitTag::SmoothFiber,
            j: Some(j),
            root_type,
            diagnostics,
        });
    }
    let mut tag = OrbitTag::DeeperStratum;
    if root_type.is(&[2, 1, 1]) {
        let double = diagnostics
            .iter()
            .find(|m| m.multiplicity == 2)
            .expect("2+1+1 has a double root");
        if double.rank == 3 {
            debug_assert!(
                double.vertex_on_base_locus,
                "rank-3 member at a multiple root must have its vertex on the base locus"
            );
            tag = OrbitTag::NodalStratum;
        }
    }
    Ok(OrbitClass {
        tag,
        j: None,
        root_type,
        diagnostics,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub lie_algebra_dim: usize,
    pub orbit_dim: usize,
}

/// Dimension of `{X ∈ gl₄ : XᵀQᵢ + QᵢX ∈ span(Q0, Q1)}` modulo scalars.
pub fn infinitesimal_stabilizer_dim(p: &Pencil) -> StabilizerReport {
    // unknowns: X[a][b] at a*4+b, then (alpha_0, beta_0, alpha_1, beta_1)
    let quads = [p.q0.matrix(), p.q1.matrix()];
    let mut rows = Vec::with_capacity(20);
    for (i, q) in quads.iter().enumerate() {
        for r in 0..4 {
            for c in r..4 {
                let mut row = vec![Rat::zero(); 20];
                for k in 0..4 {
                    // (XᵀQ)[r][c] = Σ_k X[k][r] Q[k][c]
                    row[k * 4 + r] += q.get(k, c);
                    // (QX)[r][c] = Σ_k Q[r][k] X[k][c]
                    row[k * 4 + c] += q.get(r, k);
                }
                row[16 + 2 * i] = -quads[0].get(r, c);
                row[17 + 2 * i] = -quads[1].get(r, c);
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(rows);
    let kernel_dim = 20 - linalg::rank(&system);
    // the identity is always a solution
    let lie_algebra_dim = kernel_dim - 1;
    StabilizerReport {
        lie_algebra_dim,
        orbit_dim: 15 - lie_algebra_dim.min(15),
    }
}

/// `⟨x₀²+x₁²+x₂², x₀x₃ + a·x₁² + b·x₂²⟩`
pub fn tangency_pencil(a: &Rat, b: &Rat) -> Pencil {
    let q0 = SymMat4::diagonal([Rat::one(), Rat::one(), Rat::one(), Rat::zero()]);
    let q1 = SymMat4::from_monomials(&[
        (0, 3, Rat::one()),
        (1, 1, a.clone()),
        (2, 2, b.clone()),
    ]);
    Pencil::new(q0, q1).expect("independent by construction")
}

/// The canonical nodal pencil `⟨x₀²+x₁²+x₂², x₀x₃ + x₁² + 2x₂²⟩`.
pub fn w_node() -> Pencil {
    tangency_pencil(&Rat::one(), &Rat::from_int(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    fn diag_pencil(l: [i64; 4]) -> Pencil {
        Pencil::new(
            SymMat4::diagonal([qi(1), qi(1), qi(1), qi(1)]),
            SymMat4::diagonal(l.map(qi)),
        )
        .unwrap()
    }

    #[test]
    fn discriminant_of_diagonal_pencil() {
        let f = diag_pencil([0, 1, 2, 3]).discriminant_quartic();
        // s (s+t)(s+2t)(s+3t)
        assert_eq!(f, BinaryQuartic::from_ints([1, 6, 11, 6, 0]));
    }

    #[test]
    fn discriminant_of_w_node() {
        let f = w_node().discriminant_quartic();
        assert_eq!(
            f,
            BinaryQuartic::new([qi(0), qi(0), q(-1, 4), q(-3, 4), q(-1, 2)])
        );
    }

    #[test]
    fn dependent_basis_rejected() {
        let q0 = SymMat4::diagonal([qi(1), qi(2), qi(3), qi(4)]);
        let q1 = SymMat4::diagonal([qi(2), qi(4), qi(6), qi(8)]);
        assert_eq!(Pencil::new(q0, q1), Err(Error::DependentPencil));
    }

    #[test]
    fn congruence_identity_and_singular() {
        let p = w_node();
        assert_eq!(p.congruence_act(&Matrix::identity(4)).unwrap(), p);
        let g = Matrix::<Rat>::zeros(4, 4);
        assert_eq!(p.congruence_act(&g), Err(Error::SingularGroupElement));
    }

    #[test]
    fn swapping_x1_x2_exchanges_tangency_pencils() {
        let swap = Matrix::from_rows(vec![
            vec![qi(1), qi(0), qi(0), qi(0)],
            vec![qi(0), qi(0), qi(1), qi(0)],
            vec![qi(0), qi(1), qi(0), qi(0)],
            vec![qi(0), qi(0), qi(0), qi(1)],
        ]);
        let w12 = tangency_pencil(&qi(1), &qi(2));
        let w21 = tangency_pencil(&qi(2), &qi(1));
        assert_eq!(w12.congruence_act(&swap).unwrap(), w21);
    }

    #[test]
    fn singular_members_of_diagonal_pencil() {
        let members = diag_pencil([0, 1, 2, 3]).singular_members().unwrap();
        assert_eq!(members.len(), 4);
        for m in &members {
            assert_eq!((m.multiplicity, m.rank), (1, 3));
            assert!(!m.vertex_on_base_locus);
            let (s, t) = m.root.as_rational().unwrap();
            // root s = -lambda_i t has vertex e_i
            let i = (-(s / t)).numer().try_into().unwrap_or(99usize);
            let mut e = vec![qi(0); 4];
            e[i] = qi(1);
            assert_eq!(m.vertex.as_ref().unwrap(), &e);
        }
    }

    #[test]
    fn singular_members_of_w_node() {
        let members = w_node().singular_members().unwrap();
        assert_eq!(members.len(), 3);
        let double = members.iter().find(|m| m.multiplicity == 2).unwrap();
        assert_eq!(double.root, RootPoint::Rational { s: qi(1), t: qi(0) });
        assert_eq!(double.rank, 3);
        assert!(double.vertex_on_base_locus);
        assert_eq!(double.vertex.as_ref().unwrap(), &vec![qi(0), qi(0), qi(0), qi(1)]);
        for m in members.iter().filter(|m| m.multiplicity == 1) {
            assert_eq!(m.rank, 3);
            assert!(!m.vertex_on_base_locus);
        }
    }

    #[test]
    fn line_in_d() {
        let p = Pencil::new(
            SymMat4::from_monomials(&[(0, 1, qi(1))]),
            SymMat4::from_monomials(&[(0, 2, qi(1))]),
        )
        .unwrap();
        assert!(p.discriminant_quartic().is_zero());
        assert_eq!(p.singular_members(), Err(Error::LineInD));
        assert_eq!(p.classify().unwrap().tag, OrbitTag::LineInD);
    }

    #[test]
    fn classify_examples() {
        let c = diag_pencil([0, 1, 2, 3]).classify().unwrap();
        assert_eq!(c.tag, OrbitTag::SmoothFiber);
        assert_eq!(c.j, Some(ProjValue::Finite(q(35152, 9))));
        assert_eq!(w_node().classify().unwrap().tag, OrbitTag::NodalStratum);
        let p = Pencil::new(
            SymMat4::diagonal([qi(1), qi(1), qi(0), qi(0)]),
            SymMat4::diagonal([qi(0), qi(0), qi(1), qi(1)]),
        )
        .unwrap();
        let c = p.classify().unwrap();
        assert_eq!(c.tag, OrbitTag::DeeperStratum);
        assert_eq!(c.root_type.to_string(), "2+2");
        assert!(c.diagnostics.iter().all(|m| m.rank == 2));
    }

    #[test]
    fn irrational_roots_get_exact_ranks() {
        // the x0,x1 block has irrational eigenvalues
        let q0 = SymMat4::diagonal([qi(1), qi(1), qi(1), qi(1)]);
        let q1 = SymMat4::from_monomials(&[(0, 1, qi(2)), (1, 1, qi(1)), (2, 2, qi(5)), (3, 3, qi(-1))]);
        let p = Pencil::new(q0, q1).unwrap();
        let members = p.singular_members().unwrap();
        assert_eq!(members.len(), 4);
        assert!(members.iter().all(|m| m.rank == 3 && m.multiplicity == 1));
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(
            diag_pencil([0, 1, 2, 3]).infinitesimal_stabilizer_dim(),
            StabilizerReport {
                lie_algebra_dim: 0,
                orbit_dim: 15
            }
        );
        assert_eq!(w_node().infinitesimal_stabilizer_dim().lie_algebra_dim, 0);
        let p = Pencil::new(
            SymMat4::from_monomials(&[(0, 1, qi(1))]),
            SymMat4::from_monomials(&[(0, 2, qi(1))]),
        )
        .unwrap();
        assert!(p.infinitesimal_stabilizer_dim().lie_algebra_dim >= 1);
    }

    #[test]
    fn pencil_json_round_trip() {
        let p = w_node();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.starts_with(r#"{"Q0":[["1/1","0/1""#));
        let back: Pencil = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = s.replacen(r#""1/2""#, r#""1/3""#, 1);
        assert!(serde_json::from_str::<Pencil>(&bad).is_err());
    }
}
