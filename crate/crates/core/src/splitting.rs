//! Splitting numbers of the cubic under a simple cyclic cover, computed two
//! independent ways.
//!
//! A cover of degree m branched along a curve B of degree b = mn pulls the
//! cubic E back to nu irreducible components, where nu = m / lambda and
//! lambda is the order of the class of D - 3n O in Pic^0(E); here D is the
//! intersection divisor of B with E scaled down by m, which exists exactly
//! when every local multiplicity is divisible by m.
//!
//! The second route never touches the group law: a witness curve of degree
//! kn whose full intersection divisor with E is k D exists iff k kills the
//! class, so the least such k recovers lambda from pure linear algebra. The
//! linear system demands vanishing to order k*c at each divisor point along
//! the branch of E; its solution space always contains the multiples of the
//! cubic's own form, and a witness is any solution outside that subspace.

use crate::arith::{DenseMatrix, Scalar, TruncSeries};
use crate::elliptic::{divisor_class_point, DivisorOnE, EPoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::geometry::branch::local_parametrization;
use crate::geometry::divisor::IntersectionDivisor;
use crate::geometry::form::{form_space_dim, monomials_of_degree, HomogeneousForm};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Splitmix64 step; derives independent sub-seeds from one run seed.
pub(crate) fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// A simple cyclic cover of the plane: degree m, branched along a curve of
/// degree b = mn, together with the cubic whose splitting is studied.
#[derive(Debug, Clone)]
pub struct CoverSpec {
    m: u64,
    b: usize,
    n: usize,
    branch_form: HomogeneousForm,
    cubic: WeierstrassCurve,
}

impl CoverSpec {
    /// Validates m >= 1, m | deg(branch), matching fields and p coprime to
    /// 6m. Component-sharing with the cubic is detected later, during
    /// intersection.
    pub fn new(m: u64, branch_form: HomogeneousForm, cubic: WeierstrassCurve) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("cover degree m must be positive".into()));
        }
        if branch_form.is_zero() {
            return Err(Error::InvalidInput("branch form is zero".into()));
        }
        if branch_form.field() != cubic.field() {
            return Err(Error::FieldMismatch);
        }
        let b = branch_form.degree();
        if b == 0 || b as u64 % m != 0 {
            return Err(Error::InvalidInput(format!(
                "cover degree {m} does not divide branch degree {b}"
            )));
        }
        let p = cubic.field().modulus();
        if m % p == 0 {
            return Err(Error::InvalidInput(format!(
                "characteristic {p} divides the cover degree {m}; gcd(p, 6m) must be 1"
            )));
        }
        Ok(CoverSpec { m, b, n: b / m as usize, branch_form, cubic })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn branch_form(&self) -> &HomogeneousForm {
        &self.branch_form
    }

    pub fn cubic(&self) -> &WeierstrassCurve {
        &self.cubic
    }
}

/// The intersection divisor of the branch curve with the cubic, scaled down
/// by the cover degree: coefficients I_P / m, total degree 3n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedBranchDivisor {
    divisor: DivisorOnE,
    n: usize,
}

impl ReducedBranchDivisor {
    /// Wraps an effective divisor of degree 3n.
    pub fn from_parts(divisor: DivisorOnE, n: usize) -> Result<Self> {
        if divisor.entries().values().any(|&c| c <= 0) {
            return Err(Error::InvalidInput(
                "reduced branch divisor must be effective".into(),
            ));
        }
        if divisor.degree() != 3 * n as i64 {
            return Err(Error::InvalidInput(format!(
                "divisor degree {} is not 3n = {}",
                divisor.degree(),
                3 * n
            )));
        }
        Ok(ReducedBranchDivisor { divisor, n })
    }

    pub fn divisor(&self) -> &DivisorOnE {
        &self.divisor
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The class point of D - 3n O: the group-law sum of the divisor.
    pub fn class_point(&self, cubic: &WeierstrassCurve) -> Result<EPoint> {
        let mut zero_degree = self.divisor.clone();
        zero_degree.add_entry(EPoint::Infinity, -(3 * self.n as i64));
        divisor_class_point(&zero_degree, cubic)
    }
}

/// Computes the intersection divisor of the branch curve with the cubic and
/// divides it by m, rejecting covers that are essentially ramified over the
/// cubic (some multiplicity not divisible by m).
pub fn assemble_dbc(cover: &CoverSpec) -> Result<ReducedBranchDivisor> {
    Ok(assemble_dbc_with_intersection(cover)?.0)
}

/// Same as [`assemble_dbc`], also returning the raw intersection divisor for
/// certification.
pub fn assemble_dbc_with_intersection(
    cover: &CoverSpec,
) -> Result<(ReducedBranchDivisor, IntersectionDivisor)> {
    let intersection = cover.cubic.intersection_divisor(&cover.branch_form)?;
    let m = cover.m as usize;
    let mut divisor = DivisorOnE::new();
    for (p, &mult) in intersection.entries() {
        if mult % m != 0 {
            return Err(Error::EssentiallyRamified {
                point: p.coord_values(),
                multiplicity: mult,
                modulus: cover.m,
            });
        }
        divisor.add_entry(EPoint::from_proj(p)?, (mult / m) as i64);
    }
    let dbc =
        ReducedBranchDivisor::from_parts(divisor, cover.n).expect("Bezout total 3b/m = 3n");
    Ok((dbc, intersection))
}

/// Result of the class-order route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplittingOutcome {
    /// Number of irreducible components of the pullback of the cubic.
    pub nu: u64,
    /// Order of the divisor class; nu * lambda = m.
    pub lambda: u64,
    /// The point representing the class of D - 3n O.
    pub class_point: EPoint,
}

/// Splitting number through the group law: reduce D - 3n O to a point, take
/// its order lambda, and return nu = m / lambda.
pub fn splitting_number(cover: &CoverSpec) -> Result<SplittingOutcome> {
    let dbc = assemble_dbc(cover)?;
    splitting_number_of_dbc(&dbc, cover)
}

pub(crate) fn splitting_number_of_dbc(
    dbc: &ReducedBranchDivisor,
    cover: &CoverSpec,
) -> Result<SplittingOutcome> {
    let class_point = dbc.class_point(&cover.cubic)?;
    let lambda = cover.cubic.point_order(&class_point)?;
    // m * (D - 3n O) is the class of B|_E - 3b O, which is principal, so the
    // order always divides the cover degree.
    assert_eq!(cover.m % lambda, 0, "class order must divide the cover degree");
    Ok(SplittingOutcome { nu: cover.m / lambda, lambda, class_point })
}

/// The order lambda of the class of D - 3n O; the discrete invariant that
/// indexes the connected families of branch curves.
pub fn lambda_invariant(
    branch_form: &HomogeneousForm,
    cubic: &WeierstrassCurve,
    m: u64,
) -> Result<u64> {
    let cover = CoverSpec::new(m, branch_form.clone(), *cubic)?;
    Ok(splitting_number(&cover)?.lambda)
}

/// Rank evidence for one interpolation level: the linear system's shape, its
/// rank, and how the kernel compares with the subspace of cubic multiples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankEvidence {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Dimension of f * H^0(kn - 3): solutions that are multiples of the
    /// cubic and therefore never witnesses.
    pub cubic_multiple_dim: usize,
}

impl RankEvidence {
    /// Dimension of the solution space modulo cubic multiples; a witness
    /// exists iff this is positive.
    pub fn quotient_dim(&self) -> usize {
        self.kernel_dim - self.cubic_multiple_dim
    }
}

/// Outcome of a witness search at one level k.
#[derive(Debug, Clone)]
pub struct WitnessSearch {
    pub evidence: RankEvidence,
    /// A degree-kn form with intersection divisor exactly k * D, when one
    /// exists.
    pub witness: Option<HomogeneousForm>,
}

/// The solution space of the level-k vanishing conditions.
pub(crate) struct KernelSpace {
    degree: usize,
    basis: Vec<Vec<Scalar>>,
    evidence: RankEvidence,
    cubic_form: HomogeneousForm,
}

impl KernelSpace {
    pub(crate) fn solve(
        dbc: &ReducedBranchDivisor,
        k: usize,
        cubic: &WeierstrassCurve,
    ) -> Result<Self> {
        assert!(k >= 1, "witness level must be positive");
        let degree = k * dbc.n();
        let matrix = vanishing_system(dbc, k, cubic)?;
        let basis = matrix.kernel_basis();
        let rank = matrix.cols() - basis.len();
        let cubic_multiple_dim = if degree >= 3 { form_space_dim(degree - 3) } else { 0 };
        let evidence = RankEvidence {
            rows: matrix.rows(),
            cols: matrix.cols(),
            rank,
            kernel_dim: basis.len(),
            cubic_multiple_dim,
        };
        assert!(
            evidence.kernel_dim >= cubic_multiple_dim,
            "kernel must contain every multiple of the cubic"
        );
        Ok(KernelSpace { degree, basis, evidence, cubic_form: cubic.defining_form() })
    }

    pub(crate) fn evidence(&self) -> RankEvidence {
        self.evidence
    }

    fn element(&self, coeffs: &[Scalar]) -> HomogeneousForm {
        let field = self.cubic_form.field();
        let dim = form_space_dim(self.degree);
        let mut v = vec![field.zero(); dim];
        for (c, basis_vec) in coeffs.iter().zip(self.basis.iter()) {
            for (slot, b) in v.iter_mut().zip(basis_vec.iter()) {
                *slot = *slot + *c * *b;
            }
        }
        HomogeneousForm::from_coefficient_vector(field, self.degree, &v)
    }

    /// A kernel element that is not a multiple of the cubic, or None when
    /// the whole kernel consists of multiples. Seeded random combinations
    /// are tried first; if they all land in the proper subspace of
    /// multiples, a basis scan settles it, since a subspace containing every
    /// basis vector would contain the span.
    pub(crate) fn sample_non_multiple(&self, rng: &mut ChaCha8Rng) -> Option<HomogeneousForm> {
        if self.evidence.quotient_dim() == 0 {
            return None;
        }
        let field = self.cubic_form.field();
        let p = field.modulus();
        for _ in 0..32 {
            let coeffs: Vec<Scalar> = (0..self.basis.len())
                .map(|_| field.scalar_from_u64(rng.gen_range(0..p)))
                .collect();
            let candidate = self.element(&coeffs);
            if !candidate.is_zero() && candidate.divide_by_cubic(&self.cubic_form).is_none() {
                return Some(candidate);
            }
        }
        for i in 0..self.basis.len() {
            let mut coeffs = vec![field.zero(); self.basis.len()];
            coeffs[i] = field.one();
            let candidate = self.element(&coeffs);
            if candidate.divide_by_cubic(&self.cubic_form).is_none() {
                return Some(candidate);
            }
        }
        unreachable!("positive quotient dimension guarantees a non-multiple basis vector")
    }
}

/// Builds the linear system on degree-kn form coefficients demanding
/// vanishing order >= k * c at every divisor point along the cubic. Rows are
/// the low-order coefficients of each monomial composed with the local
/// branch of the cubic.
fn vanishing_system(
    dbc: &ReducedBranchDivisor,
    k: usize,
    cubic: &WeierstrassCurve,
) -> Result<DenseMatrix> {
    let field = cubic.field();
    let degree = k * dbc.n();
    let cubic_form = cubic.defining_form();
    let mons = monomials_of_degree(degree);
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(3 * degree);
    for (point, &c) in dbc.divisor().entries() {
        let target = k * c as usize;
        let branch = local_parametrization(&cubic_form, &point.to_proj(field), target)?;
        let coords = branch.coord_series();
        // Powers of each coordinate series, shared by all monomials.
        let mut pows: [Vec<TruncSeries>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (v, cache) in pows.iter_mut().enumerate() {
            cache.push(TruncSeries::constant(field.one(), target));
            for e in 1..=degree {
                let next = cache[e - 1].mul(&coords[v])?;
                cache.push(next);
            }
        }
        let mut point_rows = vec![vec![field.zero(); mons.len()]; target];
        for (col, &(i, j, l)) in mons.iter().enumerate() {
            let composed =
                pows[0][i as usize].mul(&pows[1][j as usize])?.mul(&pows[2][l as usize])?;
            for (ord, row) in point_rows.iter_mut().enumerate() {
                row[col] = composed.coeff(ord);
            }
        }
        rows.extend(point_rows);
    }
    Ok(DenseMatrix::from_rows(field, rows))
}

/// Searches for a degree-kn curve restricting to exactly k * D on the cubic.
/// Absence is a valid answer: the rank evidence certifies that every
/// solution is a multiple of the cubic.
pub fn principality_witness(
    dbc: &ReducedBranchDivisor,
    k: u64,
    cubic: &WeierstrassCurve,
    seed: u64,
) -> Result<WitnessSearch> {
    if k == 0 {
        return Err(Error::InvalidInput("witness level must be positive".into()));
    }
    let space = KernelSpace::solve(dbc, k as usize, cubic)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k));
    let witness = space.sample_non_multiple(&mut rng);
    if let Some(w) = &witness {
        // A kernel element that is not a multiple of the cubic meets it in
        // exactly k * D: the prescribed orders exhaust the Bezout total.
        assert!(
            verify_witness(w, dbc, k, cubic)?,
            "witness failed re-verification; vanishing system is inconsistent"
        );
    }
    Ok(WitnessSearch { evidence: space.evidence(), witness })
}

/// Checks that the intersection divisor of `form` with the cubic equals
/// k * D exactly, as maps of points to multiplicities.
pub fn verify_witness(
    form: &HomogeneousForm,
    dbc: &ReducedBranchDivisor,
    k: u64,
    cubic: &WeierstrassCurve,
) -> Result<bool> {
    if form.degree() != k as usize * dbc.n() {
        return Ok(false);
    }
    let actual = match cubic.intersection_divisor(form) {
        Ok(d) => d,
        // A short total means the divisor is certainly not k * D.
        Err(Error::NonRationalIntersection { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let field = cubic.field();
    if actual.support_size() != dbc.divisor().entries().len() {
        return Ok(false);
    }
    for (point, &c) in dbc.divisor().entries() {
        if actual.multiplicity(&point.to_proj(field)) != k as usize * c as usize {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Splitting number through interpolation alone: the least level k admitting
/// a witness equals lambda, so the answer is m / k. Independent of the
/// group-law route aside from sharing the intersection machinery.
pub fn splitting_number_oracle(cover: &CoverSpec, seed: u64) -> Result<u64> {
    let dbc = assemble_dbc(cover)?;
    splitting_number_oracle_of_dbc(&dbc, cover, seed)
}

pub(crate) fn splitting_number_oracle_of_dbc(
    dbc: &ReducedBranchDivisor,
    cover: &CoverSpec,
    seed: u64,
) -> Result<u64> {
    for k in 1..=cover.m {
        let search = principality_witness(dbc, k, &cover.cubic, seed)?;
        if search.witness.is_some() {
            assert_eq!(cover.m % k, 0, "least witness level must divide the cover degree");
            return Ok(cover.m / k);
        }
    }
    unreachable!("level m always carries a witness: m(D - 3nO) is principal")
}
