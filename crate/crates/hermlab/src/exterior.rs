//! Exterior algebra over a fixed invariant (1,0)-coframe with a
//! Maurer-Cartan differential.
//!
//! The coframe has `n` holomorphic generators `phi_1..phi_n` and their
//! conjugates `phibar_1..phibar_n`. Generators are numbered `0..2n`:
//! holomorphic indices first, then antiholomorphic. A monomial is a strictly
//! increasing subset of generators, stored as a bitmask; every [`Form`] is a
//! finite sum of monomials with complex coefficients.
//!
//! All tensors in this crate have constant coefficients in the given coframe,
//! so the exterior derivative is purely algebraic: it is determined by the
//! structure constants `d phi_k` and the Leibniz rule.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type C = Complex64;

/// Maximum coframe dimension. Keeps the full exterior algebra (2^{2n}
/// monomials) at desk scale.
pub const MAX_DIM: usize = 6;

/// A frame direction used when evaluating forms: `E(i)` is the holomorphic
/// frame vector dual to `phi_i`, `EBar(i)` its conjugate. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameVector {
    E(usize),
    EBar(usize),
}

impl FrameVector {
    /// Generator index in `0..2n`.
    pub fn generator_index(self, n: usize) -> usize {
        match self {
            FrameVector::E(i) => i,
            FrameVector::EBar(i) => n + i,
        }
    }

    /// Conjugate direction.
    pub fn conj(self) -> FrameVector {
        match self {
            FrameVector::E(i) => FrameVector::EBar(i),
            FrameVector::EBar(i) => FrameVector::E(i),
        }
    }

    /// All 2n frame directions, holomorphic first.
    pub fn all(n: usize) -> Vec<FrameVector> {
        (0..n)
            .map(FrameVector::E)
            .chain((0..n).map(FrameVector::EBar))
            .collect()
    }

    /// Direction for generator index `g` in `0..2n`.
    pub fn from_generator_index(g: usize, n: usize) -> FrameVector {
        if g < n {
            FrameVector::E(g)
        } else {
            FrameVector::EBar(g - n)
        }
    }
}

#[derive(Debug, Error)]
pub enum ExteriorError {
    #[error("coframe dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("arity mismatch: form of degree {degree} evaluated on {vectors} vectors")]
    ArityMismatch { degree: usize, vectors: usize },
}

/// A single violation found while validating structure constants.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `d phi_k` has a nonzero (0,2) component, so the complex structure the
    /// coframe encodes is not integrable.
    NonIntegrable { k: usize, norm: f64 },
    /// `d(d phi_k)` fails to vanish: the structure constants break the Jacobi
    /// identity.
    NotClosed { k: usize, residual: f64 },
    /// `d phi_k` is not a homogeneous 2-form.
    WrongDegree { k: usize },
    /// Complex dimension outside `2..=MAX_DIM`.
    DimensionOutOfRange { n: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonIntegrable { k, norm } => {
                write!(f, "non-integrable: (0,2) part in dphi_{} (norm {:.3e})", k + 1, norm)
            }
            Violation::NotClosed { k, residual } => {
                write!(f, "d^2 != 0 on phi_{} (residual {:.3e})", k + 1, residual)
            }
            Violation::WrongDegree { k } => write!(f, "dphi_{} is not a 2-form", k + 1),
            Violation::DimensionOutOfRange { n } => {
                write!(f, "dimension n = {} outside supported range 2..={}", n, MAX_DIM)
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("invalid frame algebra: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Sign of merging two disjoint sorted generator sets `a` and `b`
/// (`xi_a wedge xi_b`), i.e. the parity of the interleaving permutation.
fn merge_sign(a: u32, b: u32) -> f64 {
    let mut inv = 0u32;
    let mut rest = b;
    while rest != 0 {
        let g = rest.trailing_zeros();
        inv += (a >> (g + 1)).count_ones();
        rest &= rest - 1;
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Graded complex exterior element over the `2n`-dimensional complexified
/// coframe.
///
/// Monomial keys are bitmasks over generators, holomorphic bits `0..n`,
/// antiholomorphic bits `n..2n`; keys are canonical (strictly increasing
/// index lists), so coefficient comparison is exact. Mixed-degree sums are
/// allowed; the graded operations act term by term.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    n: usize,
    terms: BTreeMap<u32, C>,
}

impl Form {
    pub fn zero(n: usize) -> Form {
        Form { n, terms: BTreeMap::new() }
    }

    /// Degree-0 form (a scalar).
    pub fn scalar(n: usize, c: C) -> Form {
        let mut f = Form::zero(n);
        f.add_term(0, c);
        f
    }

    /// The holomorphic generator `phi_i` (0-based).
    pub fn hol(n: usize, i: usize) -> Form {
        assert!(i < n, "generator index out of range");
        Form::from_mask(n, 1 << i, C::new(1.0, 0.0))
    }

    /// The antiholomorphic generator `phibar_i` (0-based).
    pub fn anti(n: usize, i: usize) -> Form {
        assert!(i < n, "generator index out of range");
        Form::from_mask(n, 1 << (n + i), C::new(1.0, 0.0))
    }

    /// Monomial from a canonical bitmask.
    pub fn from_mask(n: usize, mask: u32, c: C) -> Form {
        assert!(mask >> (2 * n) == 0, "mask out of range for dimension {n}");
        let mut f = Form::zero(n);
        f.add_term(mask, c);
        f
    }

    /// Monomial from a generator index list in any order; the coefficient is
    /// canonicalized with the permutation sign. Repeated indices give zero.
    pub fn monomial(n: usize, gens: &[usize], c: C) -> Form {
        let mut mask = 0u32;
        let mut sign = 1.0;
        for &g in gens {
            assert!(g < 2 * n, "generator index out of range");
            let bit = 1u32 << g;
            if mask & bit != 0 {
                return Form::zero(n);
            }
            // moving xi_g past everything already placed above it
            sign *= merge_sign(mask, bit);
            mask |= bit;
        }
        Form::from_mask(n, mask, c * sign)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, C)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    /// Coefficient of the canonical monomial `mask`.
    pub fn coeff(&self, mask: u32) -> C {
        self.terms.get(&mask).copied().unwrap_or_else(|| C::new(0.0, 0.0))
    }

    fn add_term(&mut self, mask: u32, c: C) {
        if c.re == 0.0 && c.im == 0.0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mask) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.re == 0.0 && v.im == 0.0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.n, other.n, "coframe dimension mismatch");
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.scale(C::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C) -> Form {
        let mut out = Form::zero(self.n);
        for (m, v) in self.terms() {
            out.add_term(m, v * c);
        }
        out
    }

    pub fn scale_re(&self, x: f64) -> Form {
        self.scale(C::new(x, 0.0))
    }

    /// Wedge product. Bilinear, associative, graded-commutative.
    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.n, other.n, "coframe dimension mismatch");
        let mut out = Form::zero(self.n);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                if ma & mb != 0 {
                    continue;
                }
                let s = merge_sign(ma, mb);
                out.add_term(ma | mb, ca * cb * s);
            }
        }
        out
    }

    /// Complex conjugation: maps a (p,q)-monomial to the (q,p)-monomial with
    /// conjugated coefficient; an involution.
    pub fn conj(&self) -> Form {
        let n = self.n;
        let low = (1u32 << n) - 1;
        let mut out = Form::zero(n);
        for (m, c) in self.terms() {
            let p = (m & low).count_ones() as usize;
            let q = (m >> n).count_ones() as usize;
            let swapped = ((m & low) << n) | (m >> n);
            let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
            out.add_term(swapped, c.conj() * sign);
        }
        out
    }

    /// Bidegree (p,q) of a monomial mask.
    pub fn mask_bidegree(n: usize, mask: u32) -> (usize, usize) {
        let low = (1u32 << n) - 1;
        ((mask & low).count_ones() as usize, (mask >> n).count_ones() as usize)
    }

    /// The (p,q)-component.
    pub fn type_project(&self, p: usize, q: usize) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in self.terms() {
            if Form::mask_bidegree(self.n, m) == (p, q) {
                out.add_term(m, c);
            }
        }
        out
    }

    /// The degree-k component.
    pub fn degree_project(&self, k: usize) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in self.terms() {
            if m.count_ones() as usize == k {
                out.add_term(m, c);
            }
        }
        out
    }

    /// Total degree if homogeneous (the zero form reports degree 0).
    pub fn degree(&self) -> Option<usize> {
        let mut deg = None;
        for (m, _) in self.terms() {
            let d = m.count_ones() as usize;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        Some(deg.unwrap_or(0))
    }

    /// Bidegree if homogeneous of pure type.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut bd = None;
        for (m, _) in self.terms() {
            let t = Form::mask_bidegree(self.n, m);
            match bd {
                None => bd = Some(t),
                Some(e) if e != t => return None,
                _ => {}
            }
        }
        bd
    }

    /// Evaluate against an ordered list of frame directions, one per degree.
    ///
    /// Convention: `(alpha wedge beta)(X, Y) = alpha(X) beta(Y) - alpha(Y) beta(X)`
    /// and its determinant extension in higher degree (no 1/k! factor).
    ///
    /// Panics if the list length differs from the degree of any nonzero term.
    pub fn evaluate(&self, vectors: &[FrameVector]) -> C {
        let k = vectors.len();
        let dirs: Vec<usize> = vectors.iter().map(|v| v.generator_index(self.n)).collect();
        let mut acc = C::new(0.0, 0.0);
        for (m, c) in self.terms() {
            let deg = m.count_ones() as usize;
            assert_eq!(
                deg, k,
                "arity mismatch: degree {deg} monomial evaluated on {k} vectors"
            );
            let s = eval_sign(m, &dirs);
            if s != 0.0 {
                acc += c * s;
            }
        }
        acc
    }

    /// Squared coefficient norm (sum of |c|^2 over canonical monomials).
    pub fn norm_sq(&self) -> f64 {
        // the empty sum is -0.0 (f64's Sum identity); normalize the sign
        self.terms().map(|(_, c)| c.norm_sqr()).sum::<f64>() + 0.0
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

        /// Wedge power `self^k`.
    pub fn wedge_pow(&self, k: usize) -> Form {
        let mut out = Form::scalar(self.n, C::new(1.0, 0.0));
        for _ in 0..k {
            out = out.wedge(self);
        }
        out
    }
}

/// Sign of evaluating the canonical monomial `mask` on the ordered generator
/// list `dirs` (0 when the sets differ or a direction repeats).
fn eval_sign(mask: u32, dirs: &[usize]) -> f64 {
    let k = dirs.len();
    let mut gens = [0usize; 32];
    let mut cnt = 0;
    let mut m = mask;
    while m != 0 {
        gens[cnt] = m.trailing_zeros() as usize;
        cnt += 1;
        m &= m - 1;
    }
    debug_assert_eq!(cnt, k);
    // permutation p: position in dirs -> position in sorted gens
    let mut perm = [usize::MAX; 32];
    let mut used = [false; 32];
    for (b, &d) in dirs.iter().enumerate() {
        let mut found = usize::MAX;
        for (a, &g) in gens[..cnt].iter().enumerate() {
            if g == d && !used[a] {
                found = a;
                break;
            }
        }
        if found == usize::MAX {
            return 0.0;
        }
        used[found] = true;
        perm[b] = found;
    }
    let mut inv = 0usize;
    for i in 0..k {
        for j in (i + 1)..k {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A single structure-constant term of `d phi_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DphiTerm {
    /// `coeff * phi_i wedge phi_j`
    HolHol { k: usize, i: usize, j: usize, coeff: C },
    /// `coeff * phi_i wedge phibar_j`
    HolAnti { k: usize, i: usize, j: usize, coeff: C },
    /// `coeff * phibar_i wedge phibar_j` (always rejected by validation)
    AntiAnti { k: usize, i: usize, j: usize, coeff: C },
}

/// The ambient "manifold": complex dimension `n` plus the Maurer-Cartan
/// differential of the (1,0)-coframe, `d phi_k`, with constant coefficients.
///
/// Invariants enforced at construction: each `d phi_k` is a 2-form with no
/// (0,2) component (integrability) and `d(d phi_k) = 0` to tolerance
/// (the Jacobi identity).
#[derive(Debug, Clone, PartialEq)]
pub struct FrameAlgebra {
    n: usize,
    dphi: Vec<Form>,
}

/// Checks candidate structure constants and returns every violation found.
/// An empty list means `FrameAlgebra::from_forms` will accept the input.
pub fn validate_algebra(n: usize, dphi: &[Form], tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    if !(2..=MAX_DIM).contains(&n) {
        out.push(Violation::DimensionOutOfRange { n });
        return out;
    }
    assert_eq!(dphi.len(), n, "expected one dphi form per generator");
    let scale: f64 = (dphi.iter().map(|f| f.norm_sq()).sum::<f64>() + 0.0).sqrt();
    for (k, f) in dphi.iter().enumerate() {
        if !f.is_zero() && f.degree() != Some(2) {
            out.push(Violation::WrongDegree { k });
            continue;
        }
        let bad = f.type_project(0, 2).norm();
        if bad > tol * (1.0 + scale) {
            out.push(Violation::NonIntegrable { k, norm: bad });
        }
    }
    if !out.is_empty() {
        return out;
    }
    // d^2 = 0 needs a differential, so build an unchecked algebra first.
    let a = FrameAlgebra { n, dphi: dphi.to_vec() };
    for k in 0..n {
        let dd = a.d(&a.dphi[k]);
        let r = dd.norm();
        if r > tol * (1.0 + scale * scale) {
            out.push(Violation::NotClosed { k, residual: r });
        }
    }
    out
}

impl FrameAlgebra {
    /// The abelian algebra (all `d phi_k = 0`): an n-torus.
    pub fn abelian(n: usize) -> FrameAlgebra {
        assert!((2..=MAX_DIM).contains(&n));
        FrameAlgebra { n, dphi: (0..n).map(|_| Form::zero(n)).collect() }
    }

    /// Builds and validates an algebra from explicit `d phi_k` forms.
    pub fn from_forms(n: usize, dphi: Vec<Form>, tol: f64) -> Result<FrameAlgebra, AlgebraError> {
        let violations = validate_algebra(n, &dphi, tol);
        if violations.is_empty() {
            Ok(FrameAlgebra { n, dphi })
        } else {
            Err(AlgebraError::Invalid(violations))
        }
    }

    /// Builds and validates an algebra from sparse structure-constant terms.
    /// Indices are 0-based; `HolHol` terms with `i > j` are canonicalized
    /// with the permutation sign, `i == j` contributes nothing.
    pub fn from_terms(n: usize, terms: &[DphiTerm], tol: f64) -> Result<FrameAlgebra, AlgebraError> {
        let mut dphi: Vec<Form> = (0..n).map(|_| Form::zero(n)).collect();
        for t in terms {
            let (k, f) = match *t {
                DphiTerm::HolHol { k, i, j, coeff } => (k, Form::monomial(n, &[i, j], coeff)),
                DphiTerm::HolAnti { k, i, j, coeff } => (k, Form::monomial(n, &[i, n + j], coeff)),
                DphiTerm::AntiAnti { k, i, j, coeff } => {
                    (k, Form::monomial(n, &[n + i, n + j], coeff))
                }
            };
            assert!(k < n, "dphi index out of range");
            dphi[k] = dphi[k].add(&f);
        }
        FrameAlgebra::from_forms(n, dphi, tol)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `d phi_k` (0-based k).
    pub fn dphi(&self, k: usize) -> &Form {
        &self.dphi[k]
    }

    /// Overall magnitude of the structure constants.
    pub fn structure_norm(&self) -> f64 {
        (self.dphi.iter().map(|f| f.norm_sq()).sum::<f64>() + 0.0).sqrt()
    }

    /// Re-run validation on this algebra (useful after coframe changes).
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        validate_algebra(self.n, &self.dphi, tol)
    }

    /// Exterior derivative, extended from the generators as an
    /// anti-derivation. Linear; satisfies the Leibniz rule and `d(d u) = 0`
    /// up to tolerance on validated algebras; commutes with conjugation
    /// exactly at the coefficient level.
    pub fn d(&self, u: &Form) -> Form {
        assert_eq!(self.n, u.dim(), "coframe dimension mismatch");
        let dh = self.d_hol(u);
        let da = self.d_hol(&u.conj()).conj();
        dh.add(&da)
    }

    /// The part of `d` that differentiates holomorphic generators only.
    fn d_hol(&self, u: &Form) -> Form {
        let n = self.n;
        let mut out = Form::zero(n);
        for (mask, c) in u.terms() {
            let mut hol = mask & ((1u32 << n) - 1);
            while hol != 0 {
                let g = hol.trailing_zeros() as usize;
                hol &= hol - 1;
                let below = (mask & ((1u32 << g) - 1)).count_ones();
                let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
                let rest = mask & !(1u32 << g);
                for (m2, c2) in self.dphi[g].terms() {
                    if m2 & rest != 0 {
                        continue;
                    }
                    let s2 = merge_sign(m2, rest);
                    out.add_term(m2 | rest, c * c2 * sign * s2);
                }
            }
        }
        out
    }

    /// `del`: the (p+1,q) component of `d u` for `u` of type (p,q),
    /// extended additively over bidegrees.
    pub fn del(&self, u: &Form) -> Form {
        self.split_d(u).0
    }

    /// `delbar`: the (p,q+1) component of `d u`, extended additively.
    pub fn delbar(&self, u: &Form) -> Form {
        self.split_d(u).1
    }

    /// Splits `d u` into (del u, delbar u) by bidegree bookkeeping per term.
    fn split_d(&self, u: &Form) -> (Form, Form) {
        let n = self.n;
        let mut del = Form::zero(n);
        let mut delbar = Form::zero(n);
        // Apply d per pure-type component so the split is well defined on
        // mixed-type inputs.
        let mut by_type: BTreeMap<(usize, usize), Form> = BTreeMap::new();
        for (m, c) in u.terms() {
            let t = Form::mask_bidegree(n, m);
            by_type.entry(t).or_insert_with(|| Form::zero(n)).add_term(m, c);
        }
        for ((p, q), comp) in by_type {
            let d = self.d(&comp);
            del = del.add(&d.type_project(p + 1, q));
            delbar = delbar.add(&d.type_project(p, q + 1));
        }
        (del, delbar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn kodaira() -> FrameAlgebra {
        // dphi_2 = phi_1 wedge phibar_1
        FrameAlgebra::from_terms(
            2,
            &[DphiTerm::HolAnti { k: 1, i: 0, j: 0, coeff: c(1.0, 0.0) }],
            1e-10,
        )
        .unwrap()
    }

    fn iwasawa() -> FrameAlgebra {
        // dphi_3 = -phi_1 wedge phi_2
        FrameAlgebra::from_terms(
            3,
            &[DphiTerm::HolHol { k: 2, i: 0, j: 1, coeff: c(-1.0, 0.0) }],
            1e-10,
        )
        .unwrap()
    }

    #[test]
    fn torus_validates_clean() {
        let a = FrameAlgebra::abelian(2);
        assert!(a.validate(1e-10).is_empty());
    }

    #[test]
    fn kodaira_validates_clean() {
        assert!(kodaira().validate(1e-10).is_empty());
    }

    #[test]
    fn anti_anti_term_rejected_as_non_integrable() {
        let err = FrameAlgebra::from_terms(
            2,
            &[DphiTerm::AntiAnti { k: 0, i: 0, j: 1, coeff: c(1.0, 0.0) }],
            1e-10,
        )
        .unwrap_err();
        let AlgebraError::Invalid(v) = err;
        assert!(matches!(v[0], Violation::NonIntegrable { k: 0, .. }));
    }

    #[test]
    fn broken_jacobi_rejected() {
        // dphi_2 = phi_1 wedge phibar_2 fails d^2 = 0: the conjugate
        // structure equation feeds back through dphibar_2.
        let err = FrameAlgebra::from_terms(
            2,
            &[DphiTerm::HolAnti { k: 1, i: 0, j: 1, coeff: c(1.0, 0.0) }],
            1e-10,
        )
        .unwrap_err();
        let AlgebraError::Invalid(v) = err;
        assert!(v.iter().any(|x| matches!(x, Violation::NotClosed { .. })));
    }

    #[test]
    fn wedge_basics() {
        let n = 2;
        let p1 = Form::hol(n, 0);
        let p2 = Form::hol(n, 1);
        let q1 = Form::anti(n, 0);
        // odd square vanishes
        assert!(p1.wedge(&p1).is_zero());
        // basis product and sign
        let w = p1.wedge(&p2);
        assert_eq!(w.coeff(0b0011), c(1.0, 0.0));
        let w2 = p2.wedge(&p1);
        assert_eq!(w2.coeff(0b0011), c(-1.0, 0.0));
        // bilinearity
        let s = p1.add(&p2).wedge(&q1);
        assert_eq!(s, p1.wedge(&q1).add(&p2.wedge(&q1)));
    }

    #[test]
    fn wedge_volume_type() {
        let n = 2;
        let v = Form::hol(n, 0)
            .wedge(&Form::anti(n, 0))
            .wedge(&Form::hol(n, 1).wedge(&Form::anti(n, 1)));
        assert_eq!(v.degree(), Some(4));
        assert!(!v.is_zero());
    }

    #[test]
    fn graded_commutativity_random() {
        // u wedge v - (-1)^{ab} v wedge u = 0 exactly
        let n = 3;
        let mk = |masks: &[(u32, f64, f64)]| {
            let mut f = Form::zero(n);
            for &(m, re, im) in masks {
                f = f.add(&Form::from_mask(n, m, c(re, im)));
            }
            f
        };
        let u = mk(&[(0b000011, 1.25, -0.5), (0b001001, 0.75, 2.0)]); // degree 2
        let v = mk(&[(0b000100, -0.3, 0.7), (0b100000, 1.1, 0.0)]); // degree 1
        let lhs = u.wedge(&v);
        let rhs = v.wedge(&u); // (-1)^{2*1} = +1
        assert_eq!(lhs, rhs);
        let w = mk(&[(0b010000, 0.2, 0.4)]);
        let lhs2 = v.wedge(&w);
        let rhs2 = w.wedge(&v).scale(c(-1.0, 0.0)); // odd-odd anticommute
        assert_eq!(lhs2, rhs2);
    }

    #[test]
    fn d_on_kodaira_generators() {
        let a = kodaira();
        assert!(a.d(&Form::hol(2, 0)).is_zero());
        let d2 = a.d(&Form::hol(2, 1));
        assert_eq!(d2, Form::hol(2, 0).wedge(&Form::anti(2, 0)));
        // d^2 = 0 on the generator
        assert!(a.d(&d2).is_zero());
    }

    #[test]
    fn d_leibniz_on_iwasawa() {
        let a = iwasawa();
        // d(phi_1 wedge phi_2) = 0 since both factors are closed
        let w = Form::hol(3, 0).wedge(&Form::hol(3, 1));
        assert!(a.d(&w).is_zero());
        // Leibniz on a random product
        let u = Form::hol(3, 2); // d u = -phi1 phi2
        let v = Form::anti(3, 1);
        let lhs = a.d(&u.wedge(&v));
        let rhs = a.d(&u).wedge(&v).add(&u.scale(c(-1.0, 0.0)).wedge(&a.d(&v)).scale(c(-1.0, 0.0)));
        // deg u = 1: d(uv) = du ^ v - u ^ dv
        let rhs2 = a.d(&u).wedge(&v).sub(&u.wedge(&a.d(&v)));
        assert_eq!(rhs, rhs2);
        assert_eq!(lhs, rhs2);
    }

    #[test]
    fn d_conj_commutes_exactly() {
        let a = kodaira();
        // all basis monomials of every degree
        for mask in 0u32..(1 << 4) {
            let u = Form::from_mask(2, mask, c(0.37, -1.89));
            let lhs = a.d(&u).conj();
            let rhs = a.d(&u.conj());
            assert_eq!(lhs, rhs, "mask {mask:#06b}");
        }
    }

    #[test]
    fn conj_is_involution_and_swaps_type() {
        let n = 2;
        let u = Form::hol(n, 0).wedge(&Form::anti(n, 1)).scale(c(0.5, 1.5));
        assert_eq!(u.bidegree(), Some((1, 1)));
        let cu = u.conj();
        assert_eq!(cu.bidegree(), Some((1, 1)));
        assert_eq!(cu.conj(), u);
        let v = Form::hol(n, 0).wedge(&Form::hol(n, 1));
        assert_eq!(v.conj().bidegree(), Some((0, 2)));
    }

    #[test]
    fn type_projection_on_kodaira() {
        let a = kodaira();
        // delbar phi_2 = phi_1 wedge phibar_1; del phi_2 = 0
        let p2 = Form::hol(2, 1);
        assert_eq!(a.delbar(&p2), Form::hol(2, 0).wedge(&Form::anti(2, 0)));
        assert!(a.del(&p2).is_zero());
    }

    #[test]
    fn d_splits_into_del_plus_delbar() {
        let a = iwasawa();
        for mask in 0u32..(1 << 6) {
            let u = Form::from_mask(3, mask, c(1.0, 0.25));
            let d = a.d(&u);
            let split = a.del(&u).add(&a.delbar(&u));
            assert_eq!(d, split, "mask {mask:#08b}");
        }
    }

    #[test]
    fn del_delbar_anticommute() {
        let a = kodaira();
        for mask in 0u32..(1 << 4) {
            let u = Form::from_mask(2, mask, c(0.8, -0.1));
            let dd = a.del(&a.del(&u));
            assert!(dd.norm() < 1e-12, "del^2 on {mask:#06b}");
            let bb = a.delbar(&a.delbar(&u));
            assert!(bb.norm() < 1e-12, "delbar^2 on {mask:#06b}");
            let mix = a.del(&a.delbar(&u)).add(&a.delbar(&a.del(&u)));
            assert!(mix.norm() < 1e-12, "mixed on {mask:#06b}");
        }
    }

    #[test]
    fn evaluate_convention() {
        let n = 2;
        let w = Form::hol(n, 0).wedge(&Form::hol(n, 1));
        use FrameVector::*;
        assert_eq!(w.evaluate(&[E(0), E(1)]), c(1.0, 0.0));
        assert_eq!(w.evaluate(&[E(1), E(0)]), c(-1.0, 0.0));
        // type mismatch evaluates to zero
        let m = Form::hol(n, 0).wedge(&Form::anti(n, 0));
        assert_eq!(m.evaluate(&[E(0), E(1)]), c(0.0, 0.0));
        // repeated vector gives zero
        assert_eq!(w.evaluate(&[E(0), E(0)]), c(0.0, 0.0));
    }

    #[test]
    fn evaluate_basis_monomial_signs() {
        let n = 3;
        let w = Form::monomial(n, &[0, 2, 4], c(1.0, 0.0));
        use FrameVector::*;
        assert_eq!(w.evaluate(&[E(0), E(2), EBar(1)]), c(1.0, 0.0));
        assert_eq!(w.evaluate(&[E(2), E(0), EBar(1)]), c(-1.0, 0.0));
        assert_eq!(w.evaluate(&[EBar(1), E(0), E(2)]), c(1.0, 0.0));
    }

    #[test]
    #[should_panic(expected = "arity mismatch")]
    fn evaluate_arity_mismatch_panics() {
        let w = Form::hol(2, 0).wedge(&Form::hol(2, 1));
        let _ = w.evaluate(&[FrameVector::E(0)]);
    }

    #[test]
    fn monomial_canonicalization() {
        let n = 2;
        let a = Form::monomial(n, &[1, 0], c(2.0, 0.0));
        let b = Form::monomial(n, &[0, 1], c(-2.0, 0.0));
        assert_eq!(a, b);
        assert!(Form::monomial(n, &[1, 1], c(3.0, 0.0)).is_zero());
    }

    #[test]
    fn d_squared_small_on_basis() {
        let a = iwasawa();
        for mask in 0u32..(1 << 6) {
            let u = Form::from_mask(3, mask, c(1.0, 0.0));
            let dd = a.d(&a.d(&u));
            assert!(dd.norm() <= 1e-10 * (1.0 + u.norm()), "mask {mask:#b}");
        }
    }
}
