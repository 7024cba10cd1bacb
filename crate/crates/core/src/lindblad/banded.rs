//! LU factorization with partial pivoting for complex banded matrices.
//!
//! Storage follows the LAPACK band layout: entry (i, j) lives in column j at row
//! `kl + ku + i − j` of a `(2·kl + ku + 1)`-row column-major array, the top `kl` rows
//! holding fill-in from row interchanges. Real and imaginary parts are kept in separate
//! arrays so the elimination loops vectorize.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandLu {
    /// Bytes needed to factor an `n × n` matrix with bandwidths `(kl, ku)`.
    pub fn memory_estimate(n: usize, kl: usize, ku: usize) -> usize {
        n.saturating_mul(2 * kl + ku + 1).saturating_mul(16)
    }

    /// Factors the matrix given by `entries`; entries outside the band are rejected.
    pub fn factor<I>(n: usize, kl: usize, ku: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let ld = 2 * kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            ku,
            ld,
            re: vec![0.0; n * ld],
            im: vec![0.0; n * ld],
            pivots: vec![0; n],
        };
        for (i, j, v) in entries {
            if i >= n || j >= n || i > j + kl || j > i + ku {
                return Err(Error::InvalidParameter(format!("entry ({i}, {j}) outside the band")));
            }
            let p = lu.pos(i, j);
            lu.re[p] += v.re;
            lu.im[p] += v.im;
        }
        lu.eliminate()?;
        Ok(lu)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn pos(&self, i: usize, j: usize) -> usize {
        j * self.ld + self.kl + self.ku + i - j
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        let p = self.pos(i, j);
        Complex64::new(self.re[p], self.im[p])
    }

    fn eliminate(&mut self) -> Result<()> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut ju = 0usize;
        let mut scale = 0.0f64;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let base = self.pos(j, j);
            let mut jp = 0;
            let mut best = -1.0;
            for r in 0..=km {
                let a = self.re[base + r].abs() + self.im[base + r].abs();
                if a > best {
                    best = a;
                    jp = r;
                }
            }
            self.pivots[j] = j + jp;
            scale = scale.max(best);
            if best == 0.0 || best <= f64::EPSILON * 1e-3 * scale {
                return Err(Error::NonUnique { sigma: 0.0 });
            }
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for k in j..=ju {
                    let a = self.pos(j, k);
                    let b = a + jp;
                    self.re.swap(a, b);
                    self.im.swap(a, b);
                }
            }
            let piv = Complex64::new(self.re[base], self.im[base]);
            let inv = piv.inv();
            for r in 1..=km {
                let v = Complex64::new(self.re[base + r], self.im[base + r]) * inv;
                self.re[base + r] = v.re;
                self.im[base + r] = v.im;
            }
            if km == 0 {
                continue;
            }
            let (lo, hi) = (base + 1, base + 1 + km);
            for k in j + 1..=ju {
                let pk = self.pos(j, k);
                let (ure, uim) = (self.re[pk], self.im[pk]);
                if ure == 0.0 && uim == 0.0 {
                    continue;
                }
                // column k rows j+1..=j+km sit right after U(j,k) and after the
                // multipliers of column j in storage
                let (head, tail) = self.re.split_at_mut(pk + 1);
                let mult_re = &head[lo..hi];
                let col_re = &mut tail[..km];
                let (head_i, tail_i) = self.im.split_at_mut(pk + 1);
                let mult_im = &head_i[lo..hi];
                let col_im = &mut tail_i[..km];
                for r in 0..km {
                    let (mr, mi) = (mult_re[r], mult_im[r]);
                    col_re[r] -= mr * ure - mi * uim;
                    col_im[r] -= mr * uim + mi * ure;
                }
            }
        }
        Ok(())
    }

    /// Solves A x = b in place.
    pub fn solve(&self, b: &mut [Complex64]) {
        assert_eq!(b.len(), self.n);
        let (n, kl) = (self.n, self.kl);
        for j in 0..n {
            let p = self.pivots[j];
            if p != j {
                b.swap(j, p);
            }
            let km = kl.min(n - 1 - j);
            let bj = b[j];
            if bj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for r in 1..=km {
                b[j + r] -= self.at(j + r, j) * bj;
            }
        }
        let kband = self.kl + self.ku;
        for j in (0..n).rev() {
            b[j] /= self.at(j, j);
            let bj = b[j];
            for i in j.saturating_sub(kband)..j {
                b[i] -= self.at(i, j) * bj;
            }
        }
    }

    /// Solves Aᴴ x = b in place.
    pub fn solve_adjoint(&self, b: &mut [Complex64]) {
        assert_eq!(b.len(), self.n);
        let (n, kl) = (self.n, self.kl);
        let kband = self.kl + self.ku;
        for j in 0..n {
            let mut acc = b[j];
            for i in j.saturating_sub(kband)..j {
                acc -= self.at(i, j).conj() * b[i];
            }
            b[j] = acc / self.at(j, j).conj();
        }
        for j in (0..n).rev() {
            let km = kl.min(n - 1 - j);
            let mut acc = b[j];
            for r in 1..=km {
                acc -= self.at(j + r, j).conj() * b[j + r];
            }
            b[j] = acc;
            let p = self.pivots[j];
            if p != j {
                b.swap(j, p);
            }
        }
    }
}
