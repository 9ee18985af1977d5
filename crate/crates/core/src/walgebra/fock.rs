//! Symbolic Fock module of `W_q(n)`.
//!
//! A [`FockVector`] stores amplitudes on the unnormalized states
//! `(a_1^+)^m1 ... (a_n^+)^mn |0>`. On these states
//!
//! ```text
//! kappa_i |m> = q^(m_i) |m>
//! a_i^+   |m> = q^(-(m_1+...+m_(i-1))) |m + e_i>
//! a_i^-   |m> = q^(m_1+...+m_(i-1)) c [m_i]_q |m - e_i>,   c = 2/(s + 1/s)
//! ```
//!
//! and distinct states are orthogonal with `<m|m> = prod_i fock_norm_factor(m_i)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qcoeff::{fock_norm_factor, q_int, QFrac};

use super::{Letter, WeylElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    n: usize,
    /// Occupations are truncated to `0..k` in root-of-unity mode.
    truncation: Option<u32>,
    amps: BTreeMap<Vec<u32>, QFrac>,
}

impl FockVector {
    pub fn zero(n: usize, truncation: Option<u32>) -> Self {
        FockVector { n, truncation, amps: BTreeMap::new() }
    }

    pub fn vacuum(n: usize, truncation: Option<u32>) -> Self {
        Self::basis(n, truncation, vec![0; n]).expect("vacuum is admissible")
    }

    /// The unnormalized state `(a_1^+)^m1 ... (a_n^+)^mn |0>`.
    pub fn basis(n: usize, truncation: Option<u32>, occupation: Vec<u32>) -> Result<Self> {
        if occupation.len() != n {
            return Err(Error::ModeMismatch(n, occupation.len()));
        }
        let mut v = Self::zero(n, truncation);
        if truncation.is_none_or(|k| occupation.iter().all(|&m| m < k)) {
            v.amps.insert(occupation, QFrac::one());
        }
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&Vec<u32>, &QFrac)> {
        self.amps.iter()
    }

    pub fn amplitude(&self, occupation: &[u32]) -> QFrac {
        self.amps.get(occupation).cloned().unwrap_or_default()
    }

    fn add(&mut self, occ: Vec<u32>, c: QFrac) {
        if c.is_zero() {
            return;
        }
        let slot = self.amps.entry(occ.clone()).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.amps.remove(&occ);
        }
    }

    pub fn scale(&self, c: &QFrac) -> FockVector {
        let mut out = Self::zero(self.n, self.truncation);
        for (m, a) in &self.amps {
            out.add(m.clone(), a * c);
        }
        out
    }

    pub fn plus(&self, o: &FockVector) -> Result<FockVector> {
        if self.n != o.n {
            return Err(Error::ModeMismatch(self.n, o.n));
        }
        let mut out = self.clone();
        for (m, a) in &o.amps {
            out.add(m.clone(), a.clone());
        }
        Ok(out)
    }

    /// Action of one generator.
    pub fn apply_letter(&self, l: Letter) -> Result<FockVector> {
        if l.mode() >= self.n {
            return Err(Error::IndexOutOfRange { index: l.mode() + 1, n: self.n });
        }
        let mut out = Self::zero(self.n, self.truncation);
        for (m, a) in &self.amps {
            let below: i32 = m[..l.mode()].iter().map(|&x| x as i32).sum();
            match l {
                Letter::Kappa(i, e) => out.add(m.clone(), a * &QFrac::q_pow(e * m[i] as i32)),
                Letter::Plus(i) => {
                    if self.truncation.is_some_and(|k| m[i] + 1 >= k) {
                        continue;
                    }
                    let mut r = m.clone();
                    r[i] += 1;
                    out.add(r, a * &QFrac::q_pow(-below));
                }
                Letter::Minus(i) => {
                    if m[i] == 0 {
                        continue;
                    }
                    let mut r = m.clone();
                    r[i] -= 1;
                    let qi = QFrac::from(q_int(m[i] as i64).expect("non-negative"));
                    let c = &(&QFrac::q_pow(below) * &QFrac::oscillator_constant()) * &qi;
                    out.add(r, a * &c);
                }
            }
        }
        Ok(out)
    }

    /// Action of an algebra element; letters of each monomial act right to left.
    pub fn apply(&self, x: &WeylElement) -> Result<FockVector> {
        if x.n() != self.n {
            return Err(Error::ModeMismatch(x.n(), self.n));
        }
        let mut out = Self::zero(self.n, self.truncation);
        for (mono, c) in x.terms() {
            let mut v = self.clone();
            for l in mono.letters().iter().rev() {
                v = v.apply_letter(*l)?;
                if v.is_zero() {
                    break;
                }
            }
            out = out.plus(&v.scale(c))?;
        }
        Ok(out)
    }
}

/// `apply_fock` under its conventional name.
pub fn apply_fock(x: &WeylElement, v: &FockVector) -> Result<FockVector> {
    v.apply(x)
}

/// Squared norm of the unnormalized basis state with the given occupations.
pub fn basis_norm(occupation: &[u32]) -> QFrac {
    occupation
        .iter()
        .map(|&m| fock_norm_factor(m as i64).expect("non-negative"))
        .fold(QFrac::one(), |acc, f| &acc * &f)
}

/// Sesquilinear form with `<0|0> = 1`, `(a_i^+)^dagger = a_i^-` and the formal
/// conjugation `s -> 1/s` on the left argument.
pub fn inner(u: &FockVector, v: &FockVector) -> Result<QFrac> {
    if u.n != v.n {
        return Err(Error::ModeMismatch(u.n, v.n));
    }
    let mut acc = QFrac::zero();
    for (m, a) in &u.amps {
        if let Some(b) = v.amps.get(m) {
            acc = &acc + &(&(&a.bar() * b) * &basis_norm(m));
        }
    }
    Ok(acc)
}
