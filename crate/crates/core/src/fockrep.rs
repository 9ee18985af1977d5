//! The Fock representation at `q = exp(i pi / k)`.
//!
//! Basis vectors `|m_1, ..., m_n>` with `0 <= m_i < k` are normalized; the index is
//! mixed radix base `k` with `m_1` most significant. Generators act by
//!
//! ```text
//! kappa_i |m> = exp(i pi m_i / k) |m>
//! a_i^+   |m> = exp(-i pi (m_1+...+m_(i-1)) / k) sqrt(2 sin(pi(m_i+1)/k) sin(pi/2k) / sin^2(pi/k)) |m + e_i>
//! a_i^-   |m> = exp(+i pi (m_1+...+m_(i-1)) / k) sqrt(2 sin(pi m_i/k)   sin(pi/2k) / sin^2(pi/k)) |m - e_i>
//! ```
//!
//! Residuals are measured in operator norm through the bound
//! `||M||_2 <= sqrt(||M||_1 ||M||_inf)`, which never under-reports.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcoeff::{fock_norm_factor, QFrac};
use crate::report::CheckResult;
use crate::uqosp::{build_gl_generator, realize, GenExpr, RelationInstance, Realization, Realizer};
use crate::walgebra::{Letter, WeylElement};
use crate::Sign;

/// Largest supported Fock dimension `k^n`.
pub const MAX_DIM: usize = 100_000;

/// Mixed-radix indexing of occupation vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockBasisIndex {
    pub n: usize,
    pub k: usize,
}

impl FockBasisIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
        }
        match k.checked_pow(n as u32) {
            Some(d) if d <= MAX_DIM => Ok(FockBasisIndex { n, k }),
            _ => Err(Error::InvalidArgument(format!("k^n exceeds {MAX_DIM} (n={n}, k={k})"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.k.pow(self.n as u32)
    }

    pub fn index(&self, m: &[usize]) -> usize {
        m.iter().fold(0, |acc, &x| acc * self.k + x)
    }

    pub fn occupation(&self, mut idx: usize) -> Vec<usize> {
        let mut m = vec![0; self.n];
        for slot in m.iter_mut().rev() {
            *slot = idx % self.k;
            idx /= self.k;
        }
        m
    }

    pub fn total(&self, idx: usize) -> usize {
        self.occupation(idx).iter().sum()
    }
}

/// Generator labels; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpLabel {
    Osc(usize, Sign),
    Kappa(usize, i32),
    /// Root vector `e_ij`, `i != j`.
    Gl(usize, usize),
    L(usize, i32),
}

impl fmt::Display for OpLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |e: i32| if e == 1 { String::new() } else { format!("^{e}") };
        match *self {
            OpLabel::Osc(i, s) => write!(f, "a{i}{s}"),
            OpLabel::Kappa(i, e) => write!(f, "k{i}{}", pow(e)),
            OpLabel::Gl(i, j) => write!(f, "e{i}{j}"),
            OpLabel::L(i, e) => write!(f, "L{i}{}", pow(e)),
        }
    }
}

/// Sparse complex square matrix, stored by rows with sorted columns.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix {
    pub label: Option<OpLabel>,
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl RepMatrix {
    pub fn zero(dim: usize) -> Self {
        RepMatrix { label: None, dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal((0..dim).map(|_| Complex64::new(1.0, 0.0)).collect())
    }

    pub fn diagonal(d: Vec<Complex64>) -> Self {
        let dim = d.len();
        let rows = d.into_iter().enumerate().map(|(i, v)| if v == Complex64::new(0.0, 0.0) { vec![] } else { vec![(i, v)] }).collect();
        RepMatrix { label: None, dim, rows }
    }

    pub fn from_triplets(dim: usize, entries: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); dim];
        for (r, c, v) in entries {
            *acc[r].entry(c).or_default() += v;
        }
        RepMatrix { label: None, dim, rows: acc.into_iter().map(|m| m.into_iter().collect()).collect() }
    }

    pub fn with_label(mut self, label: OpLabel) -> Self {
        self.label = Some(label);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.rows[r].binary_search_by_key(&c, |e| e.0).map_or(Complex64::new(0.0, 0.0), |p| self.rows[r][p].1)
    }

    /// Stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut d = vec![vec![Complex64::new(0.0, 0.0); self.dim]; self.dim];
        for (r, c, v) in self.triplets() {
            d[r][c] = v;
        }
        d
    }

    pub fn scale(&self, c: Complex64) -> RepMatrix {
        RepMatrix {
            label: None,
            dim: self.dim,
            rows: self.rows.iter().map(|row| row.iter().map(|&(j, v)| (j, v * c)).collect()).collect(),
        }
    }

    pub fn add(&self, o: &RepMatrix) -> Result<RepMatrix> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch(self.dim, o.dim));
        }
        Ok(RepMatrix::from_triplets(self.dim, self.triplets().chain(o.triplets())))
    }

    pub fn sub(&self, o: &RepMatrix) -> Result<RepMatrix> {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &RepMatrix) -> Result<RepMatrix> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch(self.dim, o.dim));
        }
        let mut rows = Vec::with_capacity(self.dim);
        let mut acc: BTreeMap<usize, Complex64> = BTreeMap::new();
        for row in &self.rows {
            acc.clear();
            for &(k, a) in row {
                for &(c, b) in &o.rows[k] {
                    *acc.entry(c).or_default() += a * b;
                }
            }
            rows.push(acc.iter().map(|(&c, &v)| (c, v)).collect());
        }
        Ok(RepMatrix { label: None, dim: self.dim, rows })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> RepMatrix {
        RepMatrix::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    pub fn max_abs(&self) -> f64 {
        self.triplets().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    /// Upper bound `sqrt(||M||_1 ||M||_inf)` on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let row_max = self.rows.iter().map(|r| r.iter().map(|e| e.1.norm()).sum::<f64>()).fold(0.0, f64::max);
        let mut cols = vec![0.0; self.dim];
        for (_, c, v) in self.triplets() {
            cols[c] += v.norm();
        }
        let col_max = cols.into_iter().fold(0.0, f64::max);
        (row_max * col_max).sqrt()
    }

    /// `row,col,re,im` lines, 0-based, row-major, with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for (r, c, v) in self.triplets() {
            out.push_str(&format!("{r},{c},{:e},{:e}\n", v.re, v.im));
        }
        out
    }
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// `|amp|^2` of `a^+ : |m> -> |m+1>` from the explicit sine formula.
pub fn raising_weight(k: usize, m: usize) -> f64 {
    let kf = k as f64;
    let s = (PI / kf).sin();
    (2.0 * (PI * (m as f64 + 1.0) / kf).sin() * (PI / (2.0 * kf)).sin() / (s * s)).max(0.0)
}

/// The `k^n`-dimensional Fock representation.
#[derive(Clone, Debug)]
pub struct FockRep {
    pub basis: FockBasisIndex,
    osc: Vec<[RepMatrix; 2]>,
    kappa: Vec<Vec<Complex64>>,
}

impl FockRep {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let basis = FockBasisIndex::new(n, k)?;
        let dim = basis.dim();
        let kf = k as f64;
        let mut osc = Vec::with_capacity(n);
        let mut kappa = Vec::with_capacity(n);
        for i in 0..n {
            let mut plus = Vec::new();
            let mut minus = Vec::new();
            let mut diag = Vec::with_capacity(dim);
            for idx in 0..dim {
                let m = basis.occupation(idx);
                let below: usize = m[..i].iter().sum();
                let phase = PI * below as f64 / kf;
                diag.push(cis(PI * m[i] as f64 / kf));
                if m[i] + 1 < k {
                    let mut up = m.clone();
                    up[i] += 1;
                    plus.push((basis.index(&up), idx, cis(-phase) * raising_weight(k, m[i]).sqrt()));
                }
                if m[i] > 0 {
                    let mut down = m.clone();
                    down[i] -= 1;
                    minus.push((basis.index(&down), idx, cis(phase) * raising_weight(k, m[i] - 1).sqrt()));
                }
            }
            osc.push([
                RepMatrix::from_triplets(dim, minus).with_label(OpLabel::Osc(i + 1, Sign::Minus)),
                RepMatrix::from_triplets(dim, plus).with_label(OpLabel::Osc(i + 1, Sign::Plus)),
            ]);
            kappa.push(diag);
        }
        Ok(FockRep { basis, osc, kappa })
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn k(&self) -> usize {
        self.basis.k
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn q(&self) -> Complex64 {
        cis(PI / self.k() as f64)
    }

    fn check_mode(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            Err(Error::IndexOutOfRange { index: i, n: self.n() })
        } else {
            Ok(())
        }
    }

    pub fn oscillator(&self, i: usize, sign: Sign) -> Result<&RepMatrix> {
        self.check_mode(i)?;
        Ok(&self.osc[i - 1][usize::from(sign == Sign::Plus)])
    }

    pub fn kappa(&self, i: usize, exp: i32) -> Result<RepMatrix> {
        self.check_mode(i)?;
        Ok(RepMatrix::diagonal(self.kappa[i - 1].iter().map(|z| z.powi(exp)).collect()))
    }

    /// Matrix of a generator label. `e_ij` uses the closed form
    /// `-cos(pi/2k) kappa_j a_j^+ a_i^-` (`i < j`) or `-cos(pi/2k) a_j^+ a_i^- kappa_i^-1` (`i > j`);
    /// `L_i` is the image `s^-1 kappa_i^-1` evaluated at the root.
    pub fn generator(&self, label: OpLabel) -> Result<RepMatrix> {
        let m = match label {
            OpLabel::Osc(i, s) => self.oscillator(i, s)?.clone(),
            OpLabel::Kappa(i, e) => self.kappa(i, e)?,
            OpLabel::L(i, e) => self.kappa(i, -e)?.scale(QFrac::s_pow(-e).eval_root(self.k() as u32)?),
            OpLabel::Gl(i, j) => {
                self.check_mode(i)?;
                self.check_mode(j)?;
                let c = Complex64::new(-(PI / (2.0 * self.k() as f64)).cos(), 0.0);
                let ajp = self.oscillator(j, Sign::Plus)?;
                let aim = self.oscillator(i, Sign::Minus)?;
                match i.cmp(&j) {
                    std::cmp::Ordering::Less => self.kappa(j, 1)?.mul(ajp)?.mul(aim)?.scale(c),
                    std::cmp::Ordering::Greater => ajp.mul(aim)?.mul(&self.kappa(i, -1)?)?.scale(c),
                    std::cmp::Ordering::Equal => {
                        return Err(Error::InvalidArgument(format!("e{i}{j}: diagonal directions are the L_i")))
                    }
                }
            }
        };
        Ok(m.with_label(label))
    }

    /// Oscillator and Cartan generators: `a_i^±`, `kappa_i`, `L_i`.
    pub fn basic_labels(&self) -> Vec<OpLabel> {
        let mut out = Vec::new();
        for i in 1..=self.n() {
            out.push(OpLabel::Osc(i, Sign::Plus));
            out.push(OpLabel::Osc(i, Sign::Minus));
            out.push(OpLabel::Kappa(i, 1));
            out.push(OpLabel::L(i, 1));
        }
        out
    }

    pub fn gl_labels(&self) -> Vec<OpLabel> {
        let n = self.n();
        (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| OpLabel::Gl(i, j))).collect()
    }

    /// Evaluate a `W_q(n)` element monomial by monomial.
    pub fn weyl_matrix(&self, x: &WeylElement) -> Result<RepMatrix> {
        if x.n() != self.n() {
            return Err(Error::ModeMismatch(x.n(), self.n()));
        }
        let mut acc = RepMatrix::zero(self.dim());
        for (mono, c) in x.terms() {
            let mut m = RepMatrix::identity(self.dim());
            for l in mono.letters() {
                let f = match l {
                    Letter::Plus(i) => self.osc[i][1].clone(),
                    Letter::Minus(i) => self.osc[i][0].clone(),
                    Letter::Kappa(i, e) => self.kappa(i + 1, e)?,
                };
                m = m.mul(&f)?;
            }
            acc = acc.add(&m.scale(c.eval_root(self.k() as u32)?))?;
        }
        Ok(acc)
    }
}

/// [`Realization`] into the root-of-unity matrices.
pub struct MatrixTarget<'a> {
    pub rep: &'a FockRep,
}

impl Realization for MatrixTarget<'_> {
    type Elem = RepMatrix;

    fn n(&self) -> usize {
        self.rep.n()
    }
    fn scalar(&self, c: &QFrac) -> Result<RepMatrix> {
        Ok(RepMatrix::identity(self.rep.dim()).scale(c.eval_root(self.rep.k() as u32)?))
    }
    fn osc(&self, i: usize, sign: Sign) -> Result<RepMatrix> {
        Ok(self.rep.oscillator(i, sign)?.clone())
    }
    fn kappa(&self, i: usize, exp: i32) -> Result<RepMatrix> {
        self.rep.kappa(i, exp)
    }
    fn add(&self, a: &RepMatrix, b: &RepMatrix) -> Result<RepMatrix> {
        a.add(b)
    }
    fn mul(&self, a: &RepMatrix, b: &RepMatrix) -> Result<RepMatrix> {
        a.mul(b)
    }
    fn scale(&self, a: &RepMatrix, c: &QFrac) -> Result<RepMatrix> {
        Ok(a.scale(c.eval_root(self.rep.k() as u32)?))
    }
}

/// Tolerances: `rel` for operator-norm residuals, `entry` for entrywise structure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub entry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rel: 1e-9, entry: 1e-12 }
    }
}

fn tag(rep: &FockRep) -> String {
    format!("n={},k={}", rep.n(), rep.k())
}

/// `a_i^-` against the adjoint of `a_i^+`, and unimodular diagonal `kappa_i`, `L_i`.
pub fn check_unitarity(rep: &FockRep, tol: &Tolerances) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for i in 1..=rep.n() {
        for s in Sign::BOTH {
            let mut per_col = vec![0usize; rep.dim()];
            for (_, c, _) in rep.oscillator(i, s)?.triplets() {
                per_col[c] += 1;
            }
            let ok = per_col.iter().all(|&x| x <= 1);
            out.push(CheckResult::flag(format!("STRUCTURE[{},a{i}{s}]", tag(rep)), ok, "at most one nonzero per column"));
        }
        let dev = rep.oscillator(i, Sign::Minus)?.sub(&rep.oscillator(i, Sign::Plus)?.adjoint())?.max_abs();
        out.push(CheckResult::numeric(format!("UNITARY[{},a{i}]", tag(rep)), dev, tol.entry, "max |a- - (a+)^dagger|"));
        for label in [OpLabel::Kappa(i, 1), OpLabel::L(i, 1)] {
            let m = rep.generator(label)?;
            let mut dev: f64 = 0.0;
            for (r, c, v) in m.triplets() {
                dev = dev.max(if r == c { (v.norm() - 1.0).abs() } else { v.norm() });
            }
            out.push(CheckResult::numeric(format!("UNITARY[{},{label}]", tag(rep)), dev, tol.entry, "diagonal unimodular"));
        }
    }
    Ok(out)
}

/// The defining relations of `W_q(n)` as matrix identities.
pub fn check_weyl_relations(rep: &FockRep, tol: &Tolerances) -> Result<Vec<CheckResult>> {
    let n = rep.n();
    let kk = rep.k() as u32;
    let qv = |e: i32| QFrac::q_pow(e).eval_root(kk);
    let c = QFrac::oscillator_constant().eval_root(kk)?;
    let mut out = Vec::new();
    let a = |i, s| rep.oscillator(i, s);
    for i in 1..=n {
        for s in Sign::BOTH {
            let e = s.value();
            let lhs = a(i, Sign::Minus)?.mul(a(i, Sign::Plus)?)?.sub(&a(i, Sign::Plus)?.mul(a(i, Sign::Minus)?)?.scale(qv(e)?))?;
            let rhs = rep.kappa(i, -e)?.scale(c);
            let r = lhs.sub(&rhs)?.norm_bound();
            out.push(CheckResult::numeric(format!("WQ[{},i={i},sign={s},form=EXCHANGE]", tag(rep)), r, tol.rel, ""));
        }
        for j in 1..=n {
            for s in Sign::BOTH {
                let lhs = rep.kappa(i, 1)?.mul(a(j, s)?)?;
                let rhs = a(j, s)?.mul(&rep.kappa(i, 1)?)?.scale(qv(if i == j { s.value() } else { 0 })?);
                let r = lhs.sub(&rhs)?.norm_bound();
                out.push(CheckResult::numeric(format!("WQ[{},i={i},j={j},sign={s},form=KAPPA]", tag(rep)), r, tol.rel, ""));
            }
            if i < j {
                for xi in Sign::BOTH {
                    for eta in Sign::BOTH {
                        let lhs = a(i, xi)?.mul(a(j, eta)?)?;
                        let rhs = a(j, eta)?.mul(a(i, xi)?)?.scale(qv(xi.value() * eta.value())?);
                        let r = lhs.sub(&rhs)?.norm_bound();
                        out.push(CheckResult::numeric(
                            format!("WQ[{},i={i},j={j},xi={xi},eta={eta},form=CROSS]", tag(rep)),
                            r,
                            tol.rel,
                            "",
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Catalog relations as matrix identities, plus agreement between the matrix path and
/// the symbolic path (canonical `W_q(n)` image evaluated monomial by monomial).
pub fn check_matrix_relations(rep: &FockRep, instances: &[RelationInstance], tol: &Tolerances) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut mat = Realizer::new(MatrixTarget { rep });
    for inst in instances {
        let lhs = mat.eval(&inst.lhs)?;
        let rhs = mat.eval(&inst.rhs)?;
        let scale = lhs.norm_bound().max(rhs.norm_bound()).max(1.0);
        let r = lhs.sub(&rhs)?.norm_bound() / scale;
        out.push(CheckResult::numeric(format!("MAT:{}[k={}]", inst.id(), rep.k()), r, tol.rel, "relative operator-norm bound"));
        let symbolic = rep.weyl_matrix(&realize(&inst.lhs, rep.n())?)?;
        let d = symbolic.sub(&lhs)?.norm_bound() / scale;
        out.push(CheckResult::numeric(format!("SYM:{}[k={}]", inst.id(), rep.k()), d, tol.rel, "symbolic vs matrix path"));
    }
    Ok(out)
}

/// Closed-form `pi(e_ij)` against the image of `e_ij` through the realization.
pub fn check_gl_images(rep: &FockRep, tol: &Tolerances) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut mat = Realizer::new(MatrixTarget { rep });
    for label in rep.gl_labels() {
        let OpLabel::Gl(i, j) = label else { unreachable!() };
        let direct = rep.generator(label)?;
        let via = mat.eval(&build_gl_generator(rep.n(), i, j)?)?;
        let r = direct.sub(&via)?.norm_bound();
        out.push(CheckResult::numeric(format!("GL_IMAGE[{},{label}]", tag(rep)), r, tol.rel, "closed form vs realization"));
    }
    Ok(out)
}

/// `|amp(a_i^+)|^2` against the ratio of consecutive symbolic norms, and its phase.
pub fn check_norm_consistency(rep: &FockRep, tol: &Tolerances) -> Result<Vec<CheckResult>> {
    let k = rep.k();
    let mut ratios = Vec::with_capacity(k);
    for m in 0..k.saturating_sub(1) {
        let hi = fock_norm_factor(m as i64 + 1)?;
        let lo = fock_norm_factor(m as i64)?;
        let ratio = hi.div_exact(&lo).ok_or_else(|| Error::InexactDivision(format!("N({})/N({m})", m + 1)))?;
        ratios.push(ratio.eval_root(k as u32)?);
    }
    let mut out = Vec::new();
    for i in 1..=rep.n() {
        let a = rep.oscillator(i, Sign::Plus)?;
        let (mut dev, mut phase_dev, mut count) = (0.0f64, 0.0f64, 0usize);
        for (r, c, v) in a.triplets() {
            let m = rep.basis.occupation(c);
            debug_assert_eq!(rep.basis.occupation(r)[i - 1], m[i - 1] + 1);
            let ratio = ratios[m[i - 1]];
            dev = dev.max((v.norm_sqr() - ratio.re).abs()).max(ratio.im.abs());
            let below: usize = m[..i - 1].iter().sum();
            let expect = cis(-PI * below as f64 / k as f64);
            phase_dev = phase_dev.max((v / v.norm() - expect).norm());
            count += 1;
        }
        let want = rep.dim() / k * (k - 1);
        out.push(CheckResult::numeric(
            format!("NORM[{},i={i}]", tag(rep)),
            dev,
            1e-10,
            format!("{count} transitions (expected {want})"),
        ));
        out.push(CheckResult::numeric(format!("PHASE[{},i={i}]", tag(rep)), phase_dev, 1e-10, "arg of a+ amplitudes"));
        if count != want {
            out.push(CheckResult::flag(format!("NORM_COUNT[{},i={i}]", tag(rep)), false, format!("{count} != {want}")));
        }
        let _ = tol;
    }
    Ok(out)
}

/// One total-number block of the `U_q[gl(n)]` decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlBlock {
    pub m: usize,
    pub dim: usize,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlDecomposition {
    pub n: usize,
    pub k: usize,
    pub blocks: Vec<GlBlock>,
}

impl GlDecomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Coefficients of `(1 + x + ... + x^(k-1))^n`.
pub fn block_dims_polynomial(n: usize, k: usize) -> Vec<u128> {
    let mut poly = vec![1u128];
    for _ in 0..n {
        let mut next = vec![0u128; poly.len() + k - 1];
        for (d, &c) in poly.iter().enumerate() {
            for slot in &mut next[d..d + k] {
                *slot += c;
            }
        }
        poly = next;
    }
    poly
}

/// Sum of `n! / (j_0! ... j_(k-1)!)` over `j_0 + ... + j_(k-1) = n`, `sum_i i j_i = m`.
pub fn block_dim_multinomial(n: usize, k: usize, m: usize) -> u128 {
    fn rec(level: usize, k: usize, left: usize, weight: usize, n_fact: u128, denom: u128, fact: &[u128]) -> u128 {
        if level == k {
            return if left == 0 && weight == 0 { n_fact / denom } else { 0 };
        }
        let mut total = 0;
        for j in 0..=left {
            let w = j * level;
            if w > weight {
                break;
            }
            total += rec(level + 1, k, left - j, weight - w, n_fact, denom * fact[j], fact);
        }
        total
    }
    let fact: Vec<u128> = (0..=n as u128).scan(1u128, |acc, x| {
        if x > 0 {
            *acc *= x;
        }
        Some(*acc)
    }).collect();
    rec(0, k, n, m, fact[n], 1, &fact)
}

/// Partition by total number, with invariance, dimension and connectivity checks.
pub fn decompose_gl(rep: &FockRep, tol: &Tolerances) -> Result<(GlDecomposition, Vec<CheckResult>)> {
    let (n, k) = (rep.n(), rep.k());
    let top = n * (k - 1);
    let mut blocks: Vec<GlBlock> = (0..=top).map(|m| GlBlock { m, dim: 0, indices: Vec::new() }).collect();
    for idx in 0..rep.dim() {
        let b = &mut blocks[rep.basis.total(idx)];
        b.indices.push(idx);
        b.dim += 1;
    }
    let mut out = Vec::new();
    let t = tag(rep);
    out.push(CheckResult::flag(
        format!("BLOCK_COUNT[{t}]"),
        blocks.len() == n * k - n + 1 && blocks.iter().all(|b| b.dim > 0),
        format!("{} blocks, expected {}", blocks.len(), n * k - n + 1),
    ));
    let total: usize = blocks.iter().map(|b| b.dim).sum();
    out.push(CheckResult::flag(format!("DIM_SUM[{t}]"), total == k.pow(n as u32), format!("{total}")));

    let poly = block_dims_polynomial(n, k);
    for b in &blocks {
        let multi = block_dim_multinomial(n, k, b.m);
        let ok = poly.get(b.m).copied() == Some(b.dim as u128) && multi == b.dim as u128;
        out.push(CheckResult::flag(
            format!("BLOCK_DIM[{t},m={}]", b.m),
            ok,
            format!("dim {} polynomial {} multinomial {multi}", b.dim, poly.get(b.m).copied().unwrap_or(0)),
        ));
    }

    let gl: Vec<RepMatrix> = rep.gl_labels().into_iter().map(|l| rep.generator(l)).collect::<Result<_>>()?;
    let cartan: Vec<RepMatrix> = (1..=n).map(|i| rep.generator(OpLabel::L(i, 1))).collect::<Result<_>>()?;
    let mut leak: f64 = 0.0;
    for m in gl.iter().chain(&cartan) {
        for (r, c, v) in m.triplets() {
            if rep.basis.total(r) != rep.basis.total(c) {
                leak = leak.max(v.norm());
            }
        }
    }
    out.push(CheckResult::exact(format!("INVARIANT[{t}]"), leak == 0.0, leak, "entries between different blocks"));

    // strong connectivity of each block under the nonzero pattern of the e_ij
    let mut adj = vec![Vec::new(); rep.dim()];
    let mut radj = vec![Vec::new(); rep.dim()];
    for m in &gl {
        for (r, c, v) in m.triplets() {
            if v.norm() > tol.entry {
                adj[c].push(r);
                radj[r].push(c);
            }
        }
    }
    for b in &blocks {
        let reach = |g: &Vec<Vec<usize>>| {
            let mut seen = vec![false; rep.dim()];
            let mut stack = vec![b.indices[0]];
            seen[b.indices[0]] = true;
            while let Some(v) = stack.pop() {
                for &w in &g[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            b.indices.iter().all(|&i| seen[i])
        };
        let ok = reach(&adj) && reach(&radj);
        out.push(CheckResult::flag(format!("CONNECTED[{t},m={}]", b.m), ok, "nonzero pattern of pi(e_ij)"));
    }
    Ok((GlDecomposition { n, k, blocks }, out))
}

/// Outcome of probing a deformation parameter that is not of the form `exp(i pi / k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityDiagnostic {
    pub q_re: f64,
    pub q_im: f64,
    pub modulus: f64,
    /// The formal conjugation `s -> 1/s` agrees with complex conjugation only on `|q| = 1`.
    pub conjugation_invariant: bool,
    /// First `m` whose one-mode norm is not a positive real, if any up to `scanned`.
    pub first_nonpositive: Option<usize>,
    pub scanned: usize,
}

impl fmt::Display for PositivityDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q = {:.6}{:+.6}i, |q| = {:.6}: ", self.q_re, self.q_im, self.modulus)?;
        if !self.conjugation_invariant {
            write!(f, "|q| != 1, the relations are not invariant under the Fock-space conjugation; ")?;
        }
        match self.first_nonpositive {
            Some(m) => write!(f, "first non-positive norm <m|m> at m = {m}"),
            None => write!(f, "norms positive for m <= {}", self.scanned),
        }
    }
}

/// `k` with `q = exp(i pi / k)`, if `q` has that form.
pub fn root_order(q: Complex64) -> Option<usize> {
    if (q.norm() - 1.0).abs() > 1e-12 || q.arg() <= 0.0 {
        return None;
    }
    let k = PI / q.arg();
    let r = k.round();
    (r >= 2.0 && (k - r).abs() < 1e-9).then_some(r as usize)
}

/// Scan the one-mode norms, as a running product of `c [m]_q`, `(2/(s+1/s))^m [m]_q!` at `s = sqrt(q)` for `m <= scan`.
pub fn positivity_diagnostic(q: Complex64, scan: usize) -> PositivityDiagnostic {
    let s = q.sqrt();
    let c = 2.0 / (s + 1.0 / s);
    let mut first = None;
    let mut v = Complex64::new(1.0, 0.0);
    for m in 0..=scan {
        if m > 0 {
            let bracket: Complex64 = (0..m).map(|l| q.powi(m as i32 - 1 - 2 * l as i32)).sum();
            v *= c * bracket;
        }
        if !(v.re > 0.0 && v.im.abs() <= 1e-12 * v.norm().max(1.0)) {
            first = Some(m);
            break;
        }
    }
    PositivityDiagnostic {
        q_re: q.re,
        q_im: q.im,
        modulus: q.norm(),
        conjugation_invariant: (q.norm() - 1.0).abs() <= 1e-12,
        first_nonpositive: first,
        scanned: scan,
    }
}

/// Build the representation for a deformation parameter, refusing anything that is
/// not a primitive root `exp(i pi / k)`.
pub fn build_for_parameter(q: Complex64, n: usize) -> std::result::Result<FockRep, PositivityDiagnostic> {
    match root_order(q).map(|k| FockRep::new(n, k)) {
        Some(Ok(rep)) => Ok(rep),
        _ => Err(positivity_diagnostic(q, 64)),
    }
}

/// Relations catalog instances checked against one representation.
pub fn relation_instances_for(rep: &FockRep) -> Result<Vec<RelationInstance>> {
    crate::uqosp::catalog(rep.n())
}

/// Convenience: the matrix of an arbitrary expression.
pub fn expression_matrix(rep: &FockRep, x: &GenExpr) -> Result<RepMatrix> {
    x.validate(rep.n())?;
    Realizer::new(MatrixTarget { rep }).eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn basis_indexing() {
        let b = FockBasisIndex::new(3, 4).unwrap();
        assert_eq!(b.dim(), 64);
        for idx in 0..64 {
            assert_eq!(b.index(&b.occupation(idx)), idx);
        }
        assert_eq!(b.index(&[1, 0, 0]), 16);
        assert!(FockBasisIndex::new(4, 20).is_err());
        assert!(FockBasisIndex::new(1, 1).is_err());
    }

    #[test]
    fn first_raising_amplitude() {
        let rep = FockRep::new(1, 2).unwrap();
        let a = rep.oscillator(1, Sign::Plus).unwrap();
        // oracle: sqrt(2 sin(pi/2) sin(pi/4) / sin^2(pi/2)) = 2^(1/4)
        assert!((a.get(1, 0).re - 2f64.powf(0.25)).abs() < 1e-12);
        assert!((a.get(1, 0).re - 1.189207).abs() < 1e-6);
    }

    #[test]
    fn lowering_kills_empty_modes() {
        let rep = FockRep::new(2, 3).unwrap();
        for i in 1..=2 {
            let a = rep.oscillator(i, Sign::Minus).unwrap();
            for (_, c, _) in a.triplets() {
                assert!(rep.basis.occupation(c)[i - 1] > 0);
            }
        }
    }

    #[test]
    fn kappa_phase() {
        let rep = FockRep::new(2, 3).unwrap();
        let k2 = rep.kappa(2, 1).unwrap();
        let idx = rep.basis.index(&[0, 1]);
        assert!(close(k2.get(idx, idx), Complex64::from_polar(1.0, PI / 3.0)));
    }

    #[test]
    fn one_mode_anticommutator_at_k2() {
        // {e_1, f_1} = (K - K^-1)/(q - q^-1) at q = i, as 2x2 matrices
        let rep = FockRep::new(1, 2).unwrap();
        let lhs = expression_matrix(&rep, &GenExpr::anti(GenExpr::e(1), GenExpr::f(1))).unwrap();
        let kk = |e| expression_matrix(&rep, &GenExpr::k(1, e)).unwrap();
        let q = Complex64::new(0.0, 1.0);
        let rhs = kk(1).sub(&kk(-1)).unwrap().scale(1.0 / (q - 1.0 / q));
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
        assert_eq!(lhs.dim(), 2);
    }

    #[test]
    fn gl_closed_form_matches_realization() {
        for (n, k) in [(2, 3), (3, 2)] {
            let rep = FockRep::new(n, k).unwrap();
            let res = check_gl_images(&rep, &Tolerances::default()).unwrap();
            assert!(res.iter().all(|r| r.passed()), "{res:?}");
        }
    }

    #[test]
    fn polynomial_and_multinomial_dims() {
        assert_eq!(block_dims_polynomial(2, 3), vec![1, 2, 3, 2, 1]);
        assert_eq!(block_dims_polynomial(3, 3), vec![1, 3, 6, 7, 6, 3, 1]);
        for m in 0..=6 {
            assert_eq!(block_dim_multinomial(3, 3, m), block_dims_polynomial(3, 3)[m]);
        }
        assert_eq!(block_dim_multinomial(3, 2, 1), 3);
    }

    #[test]
    fn decomposition_small() {
        let rep = FockRep::new(2, 3).unwrap();
        let (d, checks) = decompose_gl(&rep, &Tolerances::default()).unwrap();
        assert_eq!(d.dims(), vec![1, 2, 3, 2, 1]);
        assert!(checks.iter().all(|c| c.passed()), "{checks:?}");
        let json: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(json["blocks"][2]["dim"], 3);
    }

    #[test]
    fn weyl_relations_and_unitarity() {
        for (n, k) in [(1, 2), (2, 3), (1, 5)] {
            let rep = FockRep::new(n, k).unwrap();
            let tol = Tolerances::default();
            for r in check_weyl_relations(&rep, &tol).unwrap().into_iter().chain(check_unitarity(&rep, &tol).unwrap()) {
                assert!(r.passed(), "{r:?}");
            }
            for r in check_norm_consistency(&rep, &tol).unwrap() {
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn refuses_non_roots() {
        let d = build_for_parameter(Complex64::new(1.1, 0.0), 2).unwrap_err();
        assert!(!d.conjugation_invariant);
        assert_eq!(d.first_nonpositive, None);
        let d = build_for_parameter(Complex64::from_polar(1.0, 1.1), 1).unwrap_err();
        assert!(d.conjugation_invariant);
        // [3]_q = 1 + 2 cos(2.2) < 0
        assert_eq!(d.first_nonpositive, Some(3));
        // small m agree with the exact norms
        let q = Complex64::from_polar(1.0, 1.1);
        let exact_first = (0..8).find(|&m| {
            let v = fock_norm_factor(m).unwrap().eval(q.sqrt());
            !(v.re > 0.0 && v.im.abs() < 1e-12)
        });
        assert_eq!(positivity_diagnostic(q, 7).first_nonpositive, exact_first.map(|m| m as usize));
        let rep = build_for_parameter(Complex64::from_polar(1.0, PI / 4.0), 2).unwrap();
        assert_eq!(rep.k(), 4);
    }

    #[test]
    fn csv_export() {
        let rep = FockRep::new(1, 2).unwrap();
        let csv = rep.generator(OpLabel::Osc(1, Sign::Plus)).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "row,col,re,im");
        assert!(lines[1].starts_with("1,0,"));
        assert_eq!(lines.len(), 2);
    }
}
