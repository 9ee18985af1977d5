//! The undeformed layer: `osp(1|2n)` as `(2n+1) x (2n+1)` matrices over `Q(sqrt 2)`.
//!
//! Rows and columns are labelled `0..=2n`. The odd generators are
//!
//! ```text
//! A_i^- = sqrt2 (E_(0,i) - E_(i+n,0))       A_i^+ = sqrt2 (E_(0,i+n) + E_(i,0))
//! ```
//!
//! and everything else (Cartan elements, Chevalley generators) is built from
//! (anti)commutators of these.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::qcoeff::{QCoeff, QFrac, QSqrt2};
use crate::report::CheckResult;
use crate::uqosp::{cartan_entry, Family, RelationInstance, Realization, Realizer};
use crate::Sign;

/// Dense square matrix over `Q(sqrt 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    dim: usize,
    data: Vec<QSqrt2>,
}

impl QMatrix {
    pub fn zero(dim: usize) -> Self {
        QMatrix { dim, data: vec![QSqrt2::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.data[i * dim + i] = QSqrt2::one();
        }
        m
    }

    /// Matrix unit `E_(row, col)`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zero(dim);
        m.data[row * dim + col] = QSqrt2::one();
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &QSqrt2 {
        &self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[QSqrt2] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QSqrt2::is_zero)
    }

    pub fn scale(&self, c: &QSqrt2) -> QMatrix {
        QMatrix { dim: self.dim, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn transpose(&self) -> QMatrix {
        let d = self.dim;
        let mut out = Self::zero(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c].clone();
            }
        }
        out
    }

    /// Largest entry in absolute value, as a float.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    fn check(&self, o: &QMatrix) -> Result<()> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch(self.dim, o.dim));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &QMatrix) -> Result<QMatrix> {
        self.check(o)?;
        Ok(QMatrix { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() })
    }

    pub fn try_mul(&self, o: &QMatrix) -> Result<QMatrix> {
        self.check(o)?;
        let d = self.dim;
        let mut out = Self::zero(d);
        for r in 0..d {
            for k in 0..d {
                let a = &self.data[r * d + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let b = &o.data[k * d + c];
                    if !b.is_zero() {
                        out.data[r * d + c] = &out.data[r * d + c] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        self.try_add(o).expect("matrix dimensions agree")
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        self.try_add(&-o).expect("matrix dimensions agree")
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        self.try_mul(o).expect("matrix dimensions agree")
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        QMatrix { dim: self.dim, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `Z_2` grade.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    Even,
    Odd,
}

impl Grade {
    fn add(self, o: Grade) -> Grade {
        if self == o {
            Grade::Even
        } else {
            Grade::Odd
        }
    }
}

/// A homogeneous element of `osp(1|2n)` in its defining representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    pub n: usize,
    pub grade: Grade,
    pub matrix: QMatrix,
}

impl GradedMatrix {
    pub fn new(n: usize, grade: Grade, matrix: QMatrix) -> Result<Self> {
        if matrix.dim() != 2 * n + 1 {
            return Err(Error::DimensionMismatch(2 * n + 1, matrix.dim()));
        }
        Ok(GradedMatrix { n, grade, matrix })
    }

    pub fn zero(n: usize, grade: Grade) -> Self {
        GradedMatrix { n, grade, matrix: QMatrix::zero(2 * n + 1) }
    }

    /// `H_i = -E_(i,i) + E_(n+i,n+i)`.
    pub fn cartan(n: usize, i: usize) -> Result<Self> {
        check_mode(n, i)?;
        let d = 2 * n + 1;
        let m = &QMatrix::unit(d, n + i, n + i) - &QMatrix::unit(d, i, i);
        Ok(GradedMatrix { n, grade: Grade::Even, matrix: m })
    }

    pub fn scale(&self, c: &QSqrt2) -> Self {
        GradedMatrix { n: self.n, grade: self.grade, matrix: self.matrix.scale(c) }
    }

    /// Sum of two elements of the same grade.
    pub fn plus(&self, o: &GradedMatrix) -> Result<Self> {
        if self.grade != o.grade {
            return Err(Error::InvalidArgument("sum of elements of different grade".into()));
        }
        Ok(GradedMatrix { n: self.n, grade: self.grade, matrix: self.matrix.try_add(&o.matrix)? })
    }

    pub fn minus(&self, o: &GradedMatrix) -> Result<Self> {
        self.plus(&o.scale(&QSqrt2::from_int(-1)))
    }

    /// Block test for membership in `osp(1|2n)`, including the grade pattern.
    pub fn is_member(&self) -> bool {
        let n = self.n;
        let m = &self.matrix;
        let at = |r: usize, c: usize| m.get(r, c).clone();
        let zero = |x: &QSqrt2| x.is_zero();
        if !zero(m.get(0, 0)) {
            return false;
        }
        for a in 1..=n {
            // first column against first row: y^T and -x^T
            if at(a, 0) != at(0, n + a) || at(n + a, 0) != -&at(0, a) {
                return false;
            }
            for b in 1..=n {
                let d = at(a, b);
                let e = at(a, n + b);
                let f = at(n + a, b);
                if e != at(b, n + a) || f != at(n + b, a) || at(n + b, n + a) != -&d {
                    return false;
                }
            }
        }
        let odd_zero = (1..=2 * n).all(|k| zero(m.get(0, k)) && zero(m.get(k, 0)));
        let even_zero = (1..=2 * n).all(|r| (1..=2 * n).all(|c| zero(m.get(r, c))));
        match self.grade {
            Grade::Even => odd_zero,
            Grade::Odd => even_zero,
        }
    }
}

fn check_mode(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        Err(Error::IndexOutOfRange { index: i, n })
    } else {
        Ok(())
    }
}

/// Classical para-Bose generator `A_i^±`.
pub fn classical_parabose(n: usize, i: usize, sign: Sign) -> Result<GradedMatrix> {
    check_mode(n, i)?;
    let d = 2 * n + 1;
    let m = match sign {
        Sign::Minus => &QMatrix::unit(d, 0, i) - &QMatrix::unit(d, i + n, 0),
        Sign::Plus => &QMatrix::unit(d, 0, i + n) + &QMatrix::unit(d, i, 0),
    };
    Ok(GradedMatrix { n, grade: Grade::Odd, matrix: m.scale(&QSqrt2::sqrt2()) })
}

/// `[[a, b]] = ab - (-1)^(deg a deg b) ba`.
pub fn supercommutator(a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
    let ab = a.matrix.try_mul(&b.matrix)?;
    let ba = b.matrix.try_mul(&a.matrix)?;
    let m = if a.grade == Grade::Odd && b.grade == Grade::Odd { &ab + &ba } else { &ab - &ba };
    Ok(GradedMatrix { n: a.n, grade: a.grade.add(b.grade), matrix: m })
}

/// `{a, b} = ab + ba`, regardless of grade.
pub fn anticommutator(a: &GradedMatrix, b: &GradedMatrix) -> Result<GradedMatrix> {
    let m = &a.matrix.try_mul(&b.matrix)? + &b.matrix.try_mul(&a.matrix)?;
    Ok(GradedMatrix { n: a.n, grade: a.grade.add(b.grade), matrix: m })
}

/// Product with grades added; only used inside homogeneous Serre polynomials.
fn product(fs: &[&GradedMatrix]) -> GradedMatrix {
    let mut acc = GradedMatrix { n: fs[0].n, grade: Grade::Even, matrix: QMatrix::identity(fs[0].matrix.dim()) };
    for f in fs {
        acc = GradedMatrix { n: acc.n, grade: acc.grade.add(f.grade), matrix: &acc.matrix * &f.matrix };
    }
    acc
}

/// Classical Chevalley generators `(h_i, e_i, f_i)` built from the `A`'s.
///
/// For `i < n`, `h_i = (1/2)({A_(i+1)^-, A_(i+1)^+} - {A_i^-, A_i^+}) = H_i - H_(i+1)`.
pub fn classical_chevalley(n: usize, i: usize) -> Result<(GradedMatrix, GradedMatrix, GradedMatrix)> {
    check_mode(n, i)?;
    let a = |j, s| classical_parabose(n, j, s);
    let half = QSqrt2::from_ratio(1, 2);
    if i == n {
        let inv_root = &QSqrt2::sqrt2() * &half;
        let h = anticommutator(&a(n, Sign::Minus)?, &a(n, Sign::Plus)?)?.scale(&QSqrt2::from_ratio(-1, 2));
        let e = a(n, Sign::Minus)?.scale(&-&inv_root);
        let f = a(n, Sign::Plus)?.scale(&inv_root);
        return Ok((h, e, f));
    }
    let e = anticommutator(&a(i, Sign::Minus)?, &a(i + 1, Sign::Plus)?)?.scale(&half);
    let f = anticommutator(&a(i, Sign::Plus)?, &a(i + 1, Sign::Minus)?)?.scale(&half);
    let h = anticommutator(&a(i + 1, Sign::Minus)?, &a(i + 1, Sign::Plus)?)?
        .minus(&anticommutator(&a(i, Sign::Minus)?, &a(i, Sign::Plus)?)?)?
        .scale(&half);
    Ok((h, e, f))
}

fn signs3() -> impl Iterator<Item = (Sign, Sign, Sign)> {
    Sign::BOTH
        .into_iter()
        .flat_map(|x| Sign::BOTH.into_iter().flat_map(move |y| Sign::BOTH.into_iter().map(move |z| (x, y, z))))
}

fn delta(i: usize, j: usize) -> i64 {
    i64::from(i == j)
}

fn int(v: i64) -> QSqrt2 {
    QSqrt2::from_int(v)
}

fn residual_check(id: String, lhs: &GradedMatrix, rhs: &GradedMatrix) -> CheckResult {
    let diff = &lhs.matrix - &rhs.matrix;
    CheckResult::exact(id, diff.is_zero(), diff.max_abs(), "")
}

/// Rank over `Q(sqrt 2)` by fraction-free (Bareiss) elimination on the rows.
pub fn rank(rows: &[Vec<QSqrt2>]) -> usize {
    let mut m: Vec<Vec<QSqrt2>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = QSqrt2::one();
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        let inv_prev = prev.inv().expect("pivots are non-zero");
        for r in rank + 1..m.len() {
            let lead = m[r][c].clone();
            for k in c..cols {
                let v = &(&(&pivot * &m[r][k]) - &(&lead * &m[rank][k])) * &inv_prev;
                m[r][k] = v;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Dimension of the span of the odd generators and their pairwise anticommutators.
pub fn span_dimension(n: usize) -> Result<usize> {
    let mut rows = Vec::new();
    let mut odd = Vec::new();
    for i in 1..=n {
        for s in Sign::BOTH {
            odd.push(classical_parabose(n, i, s)?);
        }
    }
    for x in &odd {
        rows.push(x.matrix.entries().to_vec());
        for y in &odd {
            rows.push(anticommutator(x, y)?.matrix.entries().to_vec());
        }
    }
    Ok(rank(&rows))
}

/// Rank of `{ {A_i^-, A_j^+} }`, expected `n^2`.
pub fn gl_rank(n: usize) -> Result<usize> {
    let mut rows = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let x = anticommutator(&classical_parabose(n, i, Sign::Minus)?, &classical_parabose(n, j, Sign::Plus)?)?;
            rows.push(x.matrix.entries().to_vec());
        }
    }
    Ok(rank(&rows))
}

/// The triple relation `[{A_i^xi, A_j^eta}, A_k^eps] = (eps-eta) d_jk A_i^xi + (eps-xi) d_ik A_j^eta`.
pub fn parabose_instance(n: usize, i: usize, j: usize, k: usize, xi: Sign, eta: Sign, eps: Sign) -> Result<CheckResult> {
    let a = |m, s| classical_parabose(n, m, s);
    let lhs = supercommutator(&anticommutator(&a(i, xi)?, &a(j, eta)?)?, &a(k, eps)?)?;
    let rhs = a(i, xi)?
        .scale(&int((eps.value() - eta.value()) as i64 * delta(j, k)))
        .plus(&a(j, eta)?.scale(&int((eps.value() - xi.value()) as i64 * delta(i, k))))?;
    Ok(residual_check(parabose_id(n, i, j, k, xi, eta, eps), &lhs, &rhs))
}

pub fn parabose_id(n: usize, i: usize, j: usize, k: usize, xi: Sign, eta: Sign, eps: Sign) -> String {
    format!("PB[n={n},i={i},j={j},k={k},xi={xi},eta={eta},eps={eps}]")
}

/// Every check of the classical layer; `span_dim` is reported separately.
pub fn verify_classical(n: usize) -> Result<Vec<CheckResult>> {
    if !(1..=5).contains(&n) {
        return Err(Error::InvalidArgument(format!("classical checks support 1 <= n <= 5, got {n}")));
    }
    let modes = 1..=n;
    let a = |m, s| classical_parabose(n, m, s);
    let mut out = Vec::new();

    for i in modes.clone() {
        for j in modes.clone() {
            for k in modes.clone() {
                for (xi, eta, eps) in signs3() {
                    out.push(parabose_instance(n, i, j, k, xi, eta, eps)?);
                }
            }
        }
    }

    // anticommutators {A_x^s, A_y^t}, cached by (x, s, y, t)
    let sidx = |s: Sign| usize::from(s == Sign::Plus);
    let key = |x: usize, s: Sign, y: usize, t: Sign| (((x - 1) * 2 + sidx(s)) * n + (y - 1)) * 2 + sidx(t);
    let mut anti = vec![GradedMatrix::zero(n, Grade::Even); 4 * n * n];
    for x in modes.clone() {
        for y in modes.clone() {
            for s in Sign::BOTH {
                for t in Sign::BOTH {
                    anti[key(x, s, y, t)] = anticommutator(&a(x, s)?, &a(y, t)?)?;
                }
            }
        }
    }
    let b = |x, s, y, t| &anti[key(x, s, y, t)];
    for i in modes.clone() {
        for j in modes.clone() {
            for k in modes.clone() {
                for l in modes.clone() {
                    for (xi, eta, eps) in signs3() {
                        for phi in Sign::BOTH {
                            let lhs = supercommutator(b(i, xi, j, eta), b(k, eps, l, phi))?;
                            let (x, e, f, p) = (xi.value() as i64, eta.value() as i64, eps.value() as i64, phi.value() as i64);
                            let mut rhs = GradedMatrix::zero(n, Grade::Even);
                            for (c, m) in [
                                ((f - e) * delta(j, k), b(i, xi, l, phi)),
                                ((f - x) * delta(i, k), b(j, eta, l, phi)),
                                ((p - e) * delta(j, l), b(i, xi, k, eps)),
                                ((p - x) * delta(i, l), b(j, eta, k, eps)),
                            ] {
                                if c != 0 {
                                    rhs = rhs.plus(&m.scale(&int(c)))?;
                                }
                            }
                            let id = format!("SP[n={n},i={i},j={j},k={k},l={l},xi={xi},eta={eta},eps={eps},phi={phi}]");
                            out.push(residual_check(id, &lhs, &rhs));
                        }
                    }
                }
            }
        }
    }

    let chev: Vec<_> = modes.clone().map(|i| classical_chevalley(n, i)).collect::<Result<_>>()?;
    let hs: Vec<&GradedMatrix> = chev.iter().map(|c| &c.0).collect();
    let es: Vec<&GradedMatrix> = chev.iter().map(|c| &c.1).collect();
    let fs: Vec<&GradedMatrix> = chev.iter().map(|c| &c.2).collect();
    let h = |i: usize| hs[i - 1];
    let e = |i: usize| es[i - 1];
    let f = |i: usize| fs[i - 1];
    for i in modes.clone() {
        for j in modes.clone() {
            let alpha = cartan_entry(n, i, j) as i64;
            let id = |form: &str| format!("CCK[n={n},i={i},j={j},form={form}]");
            out.push(residual_check(id("HH"), &supercommutator(h(i), h(j))?, &GradedMatrix::zero(n, Grade::Even)));
            out.push(residual_check(id("HE"), &supercommutator(h(i), e(j))?, &e(j).scale(&int(alpha))));
            out.push(residual_check(id("HF"), &supercommutator(h(i), f(j))?, &f(j).scale(&int(-alpha))));
            let lhs = supercommutator(e(i), f(j))?;
            let rhs = if i == j { h(i).clone() } else { GradedMatrix::zero(n, lhs.grade) };
            out.push(residual_check(id("EF"), &lhs, &rhs));
        }
    }
    for (tag, gens) in [("CSERRE_E", &es), ("CSERRE_F", &fs)] {
        let g = |i: usize| gens[i - 1];
        for i in modes.clone() {
            for j in i + 2..=n {
                let lhs = supercommutator(g(i), g(j))?;
                out.push(residual_check(format!("{tag}[n={n},i={i},j={j},form=COMM]"), &lhs, &GradedMatrix::zero(n, lhs.grade)));
            }
        }
        let cubic = |x: usize, y: usize| -> Result<GradedMatrix> {
            product(&[g(x), g(x), g(y)])
                .plus(&product(&[g(x), g(y), g(x)]).scale(&int(-2)))?
                .plus(&product(&[g(y), g(x), g(x)]))
        };
        for i in 1..n {
            let lhs = cubic(i, i + 1)?;
            out.push(residual_check(format!("{tag}[n={n},i={i},form=UP]"), &lhs, &GradedMatrix::zero(n, lhs.grade)));
        }
        for i in 2..n {
            let lhs = cubic(i, i - 1)?;
            out.push(residual_check(format!("{tag}[n={n},i={i},form=DOWN]"), &lhs, &GradedMatrix::zero(n, lhs.grade)));
        }
        if n >= 2 {
            let (x, y) = (g(n), g(n - 1));
            let lhs = product(&[x, x, x, y])
                .plus(&product(&[x, x, y, x]).scale(&int(-1)))?
                .plus(&product(&[x, y, x, x]).scale(&int(-1)))?
                .plus(&product(&[y, x, x, x]))?;
            out.push(residual_check(format!("{tag}[n={n},form=QUARTIC]"), &lhs, &GradedMatrix::zero(n, lhs.grade)));
        }
    }

    let mut generated = Vec::new();
    for i in modes.clone() {
        for s in Sign::BOTH {
            generated.push(a(i, s)?);
        }
    }
    let odd = generated.clone();
    for x in &odd {
        for y in &odd {
            generated.push(anticommutator(x, y)?);
        }
    }
    let members = generated.iter().filter(|m| m.is_member()).count();
    out.push(CheckResult::exact(
        format!("MEMBER[n={n}]"),
        members == generated.len(),
        (generated.len() - members) as f64,
        format!("{members}/{} matrices pass the block test", generated.len()),
    ));
    let dim = span_dimension(n)?;
    let expect = 2 * n * n + 3 * n;
    out.push(CheckResult::exact(format!("SPAN[n={n}]"), dim == expect, dim.abs_diff(expect) as f64, format!("dimension {dim}, expected {expect}")));
    let gl = gl_rank(n)?;
    out.push(CheckResult::exact(format!("GL_SPAN[n={n}]"), gl == n * n, gl.abs_diff(n * n) as f64, format!("rank {gl}, expected {}", n * n)));
    Ok(out)
}

/// Number of orders (powers of `eps`) tracked by the series evaluation.
const ORDERS: i32 = 4;

/// Truncated series `sum_k c_k eps^(low+k)` with matrix coefficients, known below order `prec`.
#[derive(Clone, Debug)]
pub struct MatrixSeries {
    low: i32,
    prec: i32,
    coeffs: Vec<QMatrix>,
}

impl MatrixSeries {
    fn constant(m: QMatrix) -> Self {
        MatrixSeries { low: 0, prec: ORDERS, coeffs: vec![m] }
    }

    fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    /// Coefficient of `eps^order`.
    pub fn coefficient(&self, order: i32) -> QMatrix {
        let k = order - self.low;
        if k < 0 || k as usize >= self.coeffs.len() {
            QMatrix::zero(self.dim())
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn precision(&self) -> i32 {
        self.prec
    }

    /// The value at `q = 1`, or `None` when a pole survives.
    pub fn limit(&self) -> Option<QMatrix> {
        if (self.low..0).any(|o| !self.coefficient(o).is_zero()) || self.prec <= 0 {
            return None;
        }
        Some(self.coefficient(0))
    }

    fn from_fn(low: i32, prec: i32, dim: usize, f: impl Fn(i32) -> QMatrix) -> Self {
        let coeffs = (low..prec.max(low + 1)).map(f).collect::<Vec<_>>();
        let coeffs = if coeffs.is_empty() { vec![QMatrix::zero(dim)] } else { coeffs };
        MatrixSeries { low, prec, coeffs }
    }

    fn add(&self, o: &MatrixSeries) -> MatrixSeries {
        let low = self.low.min(o.low);
        let prec = self.prec.min(o.prec);
        MatrixSeries::from_fn(low, prec, self.dim(), |k| &self.coefficient(k) + &o.coefficient(k))
    }

    fn mul(&self, o: &MatrixSeries) -> MatrixSeries {
        let low = self.low + o.low;
        let prec = (self.prec + o.low).min(o.prec + self.low);
        MatrixSeries::from_fn(low, prec, self.dim(), |k| {
            let mut acc = QMatrix::zero(self.dim());
            for a in self.low..=k - o.low {
                acc = &acc + &(&self.coefficient(a) * &o.coefficient(k - a));
            }
            acc
        })
    }

    fn scale(&self, c: &ScalarSeries) -> MatrixSeries {
        let low = self.low + c.low;
        let prec = (self.prec + c.low).min(c.prec + self.low);
        MatrixSeries::from_fn(low, prec, self.dim(), |k| {
            let mut acc = QMatrix::zero(self.dim());
            for a in self.low..=k - c.low {
                acc = &acc + &self.coefficient(a).scale(&c.coefficient(k - a));
            }
            acc
        })
    }
}

/// Truncated Laurent series in `eps` over `Q(sqrt 2)`.
#[derive(Clone, Debug)]
struct ScalarSeries {
    low: i32,
    prec: i32,
    coeffs: Vec<QSqrt2>,
}

impl ScalarSeries {
    fn coefficient(&self, order: i32) -> QSqrt2 {
        let k = order - self.low;
        if k < 0 || k as usize >= self.coeffs.len() {
            QSqrt2::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    fn mul(&self, o: &ScalarSeries) -> ScalarSeries {
        let low = self.low + o.low;
        let prec = (self.prec + o.low).min(o.prec + self.low);
        let coeffs = (low..prec)
            .map(|k| {
                (self.low..=k - o.low).fold(QSqrt2::zero(), |acc, a| &acc + &(&self.coefficient(a) * &o.coefficient(k - a)))
            })
            .collect();
        ScalarSeries { low, prec, coeffs }
    }

    /// Inverse of a series with invertible constant term.
    fn inv_unit(&self) -> ScalarSeries {
        assert_eq!(self.low, 0);
        let c0 = self.coefficient(0).inv().expect("unit constant term");
        let mut out = vec![c0.clone()];
        for k in 1..self.prec {
            let s = (1..=k).fold(QSqrt2::zero(), |acc, j| &acc + &(&self.coefficient(j) * &out[(k - j) as usize]));
            out.push(-&(&s * &c0));
        }
        ScalarSeries { low: 0, prec: self.prec, coeffs: out }
    }

    /// Expansion of a Laurent polynomial in `s = exp(eps/2)`.
    fn of_coeff(c: &QCoeff) -> ScalarSeries {
        let mut coeffs = vec![QSqrt2::zero(); ORDERS as usize];
        for (e, v) in c.terms() {
            // s^e = exp(e eps / 2) = sum_k (e/2)^k / k! eps^k
            let mut term = v.clone();
            for (k, slot) in coeffs.iter_mut().enumerate() {
                *slot = &*slot + &term;
                term = &term * &QSqrt2::from_ratio(e as i64, 2 * (k as i64 + 1));
            }
        }
        ScalarSeries { low: 0, prec: ORDERS, coeffs }
    }

    fn of_frac(c: &QFrac) -> ScalarSeries {
        let (plus, minus) = c.denominator();
        let mut acc = Self::of_coeff(c.numerator());
        let sp = Self::of_coeff(&QCoeff::s_plus_inv()).inv_unit();
        for _ in 0..plus {
            acc = acc.mul(&sp);
        }
        // s - 1/s = eps * (2 sinh(eps/2) / eps)
        let sm = Self::of_coeff(&QCoeff::s_minus_inv());
        let reduced = ScalarSeries { low: 0, prec: ORDERS - 1, coeffs: sm.coeffs[1..].to_vec() }.inv_unit();
        for _ in 0..minus {
            acc = acc.mul(&reduced);
            acc.low -= 1;
            acc.prec -= 1;
        }
        acc
    }
}

/// Series target for the `q -> 1` limit with `q = exp(eps)`: `L_i = exp(eps H_i)` and
/// `A_i^±` are the classical matrices.
pub struct ClassicalLimit {
    pub n: usize,
}

fn exp_series(h: &QMatrix, factor: i64) -> MatrixSeries {
    let mut coeffs = vec![QMatrix::identity(h.dim())];
    for k in 1..ORDERS {
        let next = (&coeffs[k as usize - 1] * h).scale(&QSqrt2::from_ratio(factor, k as i64));
        coeffs.push(next);
    }
    MatrixSeries { low: 0, prec: ORDERS, coeffs }
}

impl Realization for ClassicalLimit {
    type Elem = MatrixSeries;

    fn n(&self) -> usize {
        self.n
    }
    fn scalar(&self, c: &QFrac) -> Result<MatrixSeries> {
        Ok(MatrixSeries::constant(QMatrix::identity(2 * self.n + 1)).scale(&ScalarSeries::of_frac(c)))
    }
    fn osc(&self, i: usize, sign: Sign) -> Result<MatrixSeries> {
        Ok(MatrixSeries::constant(classical_parabose(self.n, i, sign)?.matrix))
    }
    fn kappa(&self, i: usize, exp: i32) -> Result<MatrixSeries> {
        // kappa = s^-1 L^-1, so kappa^e = s^-e exp(-e eps H)
        let h = GradedMatrix::cartan(self.n, i)?.matrix;
        Ok(exp_series(&h, -exp as i64).scale(&ScalarSeries::of_frac(&QFrac::s_pow(-exp))))
    }
    fn add(&self, a: &MatrixSeries, b: &MatrixSeries) -> Result<MatrixSeries> {
        Ok(a.add(b))
    }
    fn mul(&self, a: &MatrixSeries, b: &MatrixSeries) -> Result<MatrixSeries> {
        Ok(a.mul(b))
    }
    fn scale(&self, a: &MatrixSeries, c: &QFrac) -> Result<MatrixSeries> {
        Ok(a.scale(&ScalarSeries::of_frac(c)))
    }
}

/// The `q -> 1` limit of `x` in the defining representation.
pub fn classical_limit(x: &crate::uqosp::GenExpr, n: usize) -> Result<Option<QMatrix>> {
    x.validate(n)?;
    Ok(Realizer::new(ClassicalLimit { n }).eval(x)?.limit())
}

/// Classical counterpart of a pre-oscillator relation: the triple-relation instances it
/// specializes to, if any.
pub fn parabose_counterparts(inst: &RelationInstance) -> Vec<String> {
    let idx = |k: &str| inst.indices.iter().find(|(n, _)| *n == k).map(|p| p.1);
    let sign = |k: &str| inst.signs.iter().find(|(n, _)| *n == k).map(|p| p.1);
    let n = inst.n;
    match inst.family {
        Family::Pre4 => {
            let (i, j, rho, xi) = (idx("i").unwrap(), idx("j").unwrap(), sign("rho").unwrap(), sign("xi").unwrap());
            let ip = (i as i64 + rho.value() as i64) as usize;
            vec![parabose_id(n, i, ip, j, xi.flip(), xi, xi.flip())]
        }
        Family::Pre5 => {
            let xi = sign("xi").unwrap();
            vec![parabose_id(n, n - 1, n, n, xi, xi, xi)]
        }
        _ => Vec::new(),
    }
}

/// Limit checks for the pre-oscillator relations: the symbolic residual evaluated at
/// `s = 1` vanishes, the series limit of `lhs - rhs` vanishes, and where the relation
/// specializes to a triple relation, the limiting left side is the classical right side.
pub fn verify_pre_limits(n: usize) -> Result<Vec<CheckResult>> {
    let pre = [Family::Pre1, Family::Pre2, Family::Pre3, Family::Pre4, Family::Pre5];
    let opts = crate::uqosp::CatalogOptions { families: pre.to_vec(), ..Default::default() };
    let cat = crate::uqosp::catalog_with(n, &opts)?;
    let mut out = Vec::new();
    let mut series = Realizer::new(ClassicalLimit { n });
    let mut weyl = Realizer::new(crate::uqosp::WeylTarget { n });
    for inst in &cat {
        let residual = weyl.eval(&inst.difference())?;
        let coeff_zero = residual.terms().all(|(_, c)| c.at_s_one().is_some_and(|v| v.is_zero()));
        let limit = series.eval(&inst.difference())?.limit();
        let limit_zero = limit.as_ref().is_some_and(QMatrix::is_zero);
        let mut detail = Vec::new();
        let mut ok = coeff_zero && limit_zero;
        for pb in parabose_counterparts(inst) {
            let lhs = series.eval(&inst.lhs)?.limit();
            let classical = match inst.family {
                Family::Pre4 => {
                    let (i, j) = (inst.indices[0].1, inst.indices[1].1);
                    let (rho, xi) = (inst.signs[0].1, inst.signs[1].1);
                    let ip = (i as i64 + rho.value() as i64) as usize;
                    classical_triple(n, i, ip, j, xi.flip(), xi, xi.flip())?
                }
                _ => classical_triple(n, n - 1, n, n, inst.signs[0].1, inst.signs[0].1, inst.signs[0].1)?,
            };
            let matches = lhs.is_some_and(|m| m == classical);
            ok &= matches;
            detail.push(format!("{pb}:{}", if matches { "match" } else { "mismatch" }));
        }
        if inst.family == Family::Pre3 {
            // (L - L^-1)/(q - q^-1) -> H_i, so the limit reads {A_i^-, A_i^+} = -2 H_i
            let i = inst.indices[0].1;
            let lhs = series.eval(&inst.lhs)?.limit();
            let expect = GradedMatrix::cartan(n, i)?.matrix.scale(&int(-2));
            let matches = lhs.is_some_and(|m| m == expect);
            ok &= matches;
            detail.push(format!("{{A{i}-,A{i}+}}=-2H{i}:{}", if matches { "match" } else { "mismatch" }));
        }
        out.push(CheckResult::exact(format!("LIMIT:{}", inst.id()), ok, 1.0, detail.join(" ")));
    }
    Ok(out)
}

/// The right side of the classical triple relation.
fn classical_triple(n: usize, i: usize, j: usize, k: usize, xi: Sign, eta: Sign, eps: Sign) -> Result<QMatrix> {
    let a = |m, s| classical_parabose(n, m, s);
    Ok(a(i, xi)?
        .scale(&int((eps.value() - eta.value()) as i64 * delta(j, k)))
        .plus(&a(j, eta)?.scale(&int((eps.value() - xi.value()) as i64 * delta(i, k))))?
        .matrix)
}
