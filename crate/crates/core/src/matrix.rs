//! Small dense matrices over a ring, with Hermite and Smith forms over `A`.

use crate::error::{Error, Result};
use crate::fq::Fq;
use crate::poly::{PolyA, PolyRing};
use crate::ratf::{RatF, RatField};
use crate::ring::Ring;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Matrix<E> {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Matrix<E> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix<E> {
        let data = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<F: Clone>(&self, f: impl Fn(&E) -> Result<F>) -> Result<Matrix<F>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rs: &[usize], cs: &[usize]) -> Matrix<E> {
        let data = rs
            .iter()
            .flat_map(|&i| cs.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Matrix {
            rows: rs.len(),
            cols: cs.len(),
            data,
        }
    }
}

impl<E: Clone + PartialEq + std::fmt::Debug> Matrix<E> {
    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Matrix<E> {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn zero<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Matrix<E> {
        Matrix {
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn diag<R: Ring<Elem = E>>(ring: &R, d: &[E]) -> Matrix<E> {
        let mut m = Matrix::zero(ring, d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn is_identity<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.is_square() && *self == Matrix::identity(ring, self.rows)
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, o: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Matrix::zero(ring, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let v = ring.add(out.get(i, j), &ring.mul(a, o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, o: &Matrix<E>) -> Matrix<E> {
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| ring.add(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, o: &Matrix<E>) -> Matrix<E> {
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| ring.sub(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Matrix<E> {
        self.map(|a| ring.mul(c, a))
    }

    /// Row vector times matrix.
    pub fn vec_mul<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(ring.zero(), |acc, i| {
                    ring.add(&acc, &ring.mul(&v[i], self.get(i, j)))
                })
            })
            .collect()
    }

    /// Matrix times column vector.
    pub fn mul_vec<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(ring.zero(), |acc, j| {
                    ring.add(&acc, &ring.mul(self.get(i, j), &v[j]))
                })
            })
            .collect()
    }

    /// Determinant by the Leibniz expansion (any commutative ring; small sizes).
    pub fn det<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return ring.one();
        }
        if n == 1 {
            return self.get(0, 0).clone();
        }
        // Expansion along the first row.
        let mut acc = ring.zero();
        for j in 0..n {
            let a = self.get(0, j);
            if ring.is_zero(a) {
                continue;
            }
            let minor = self.minor(0, j).det(ring);
            let term = ring.mul(a, &minor);
            acc = if j % 2 == 0 {
                ring.add(&acc, &term)
            } else {
                ring.sub(&acc, &term)
            };
        }
        acc
    }

    /// The matrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Matrix<E> {
        let rs: Vec<usize> = (0..self.rows).filter(|&x| x != i).collect();
        let cs: Vec<usize> = (0..self.cols).filter(|&x| x != j).collect();
        self.select(&rs, &cs)
    }

    pub fn adjugate<R: Ring<Elem = E>>(&self, ring: &R) -> Matrix<E> {
        let n = self.rows;
        if n == 1 {
            return Matrix::identity(ring, 1);
        }
        let mut out = Matrix::zero(ring, n, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(i, j).det(ring);
                out.set(j, i, if (i + j) % 2 == 0 { m } else { ring.neg(&m) });
            }
        }
        out
    }

    /// Inverse as adjugate over determinant; needs the determinant to be a unit.
    pub fn inverse<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Matrix<E>> {
        let d = self.det(ring);
        if ring.is_zero(&d) {
            return Err(Error::SingularMatrix);
        }
        let di = ring.inv(&d)?;
        Ok(self.adjugate(ring).scale(ring, &di))
    }

    /// One line per row, entries separated by `, `.
    pub fn encode<R: Ring<Elem = E>>(&self, ring: &R) -> String {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| ring.encode(x))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn parse<R: Ring<Elem = E>>(
        text: &str,
        elem: impl Fn(&str) -> Result<E>,
    ) -> Result<Matrix<E>> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split(',')
                    .map(|x| elem(x.trim()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::Parse("ragged matrix".into()));
        }
        Ok(Matrix::from_rows(rows))
    }
}

pub type MatA = Matrix<PolyA>;
pub type MatF = Matrix<RatF>;

/// Monic lcm of the entry denominators.
pub fn common_denominator(fq: &Fq, m: &MatF) -> PolyA {
    m.entries()
        .iter()
        .fold(PolyA::one(), |acc, x| acc.lcm(fq, x.den()))
}

/// Entries as polynomials, if all are integral.
pub fn as_integral(m: &MatF) -> Option<MatA> {
    m.try_map(|x| x.as_poly().cloned().ok_or(Error::NotASublattice))
        .ok()
}

pub fn to_ratf(m: &MatA) -> MatF {
    m.map(|a| RatF::from_poly(a.clone()))
}

/// Inverse over `F = F_q(t)`.
pub fn inverse_f(fq: &Fq, m: &MatF) -> Result<MatF> {
    m.inverse(&RatField::new(fq.clone()))
}

/// Row-style Hermite normal form over `A`.
///
/// Returns the nonzero rows of an upper-echelon matrix row-equivalent to `m`
/// under `GL(A)`: pivots are monic and entries above a pivot have degree
/// below it. Two matrices span the same `A`-module iff their forms agree.
pub fn hnf(fq: &Fq, m: &MatA) -> MatA {
    let mut a = m.row_vecs();
    let rows = a.len();
    let cols = m.cols();
    let mut pr = 0;
    let sub_mul = |x: &mut Vec<PolyA>, y: &[PolyA], c: &PolyA| {
        for (xi, yi) in x.iter_mut().zip(y) {
            *xi = xi.sub(fq, &c.mul(fq, yi));
        }
    };
    for col in 0..cols {
        if pr == rows {
            break;
        }
        loop {
            let best = (pr..rows)
                .filter(|&i| !a[i][col].is_zero())
                .min_by_key(|&i| a[i][col].degi());
            let Some(b) = best else { break };
            a.swap(pr, b);
            let mut done = true;
            for i in pr + 1..rows {
                if a[i][col].is_zero() {
                    continue;
                }
                let (qt, _) = a[i][col].div_rem(fq, &a[pr][col]).expect("nonzero pivot");
                let piv = a[pr].clone();
                sub_mul(&mut a[i], &piv, &qt);
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pr >= rows || a[pr][col].is_zero() {
            continue;
        }
        let c = fq.inv(a[pr][col].lead());
        for x in a[pr].iter_mut() {
            *x = x.scale(fq, c);
        }
        let piv = a[pr].clone();
        for i in 0..pr {
            let (qt, _) = a[i][col].div_rem(fq, &piv[col]).expect("nonzero pivot");
            if !qt.is_zero() {
                sub_mul(&mut a[i], &piv, &qt);
            }
        }
        pr += 1;
    }
    a.truncate(pr);
    a.retain(|r| r.iter().any(|x| !x.is_zero()));
    if a.is_empty() {
        return Matrix::new(0, cols, Vec::new());
    }
    Matrix::from_rows(a)
}

/// Elementary divisors of a square matrix over `A` (monic, each dividing the
/// next), via gcds of minors.
pub fn elementary_divisors(fq: &Fq, m: &MatA) -> Vec<PolyA> {
    let ring = PolyRing::new(fq.clone());
    let n = m.rows().min(m.cols());
    let mut out = Vec::with_capacity(n);
    let mut prev = PolyA::one();
    for k in 1..=n {
        let mut g = PolyA::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                g = g.gcd(fq, &m.select(&rs, &cs).det(&ring));
            }
        }
        if g.is_zero() {
            out.push(PolyA::zero());
            continue;
        }
        let g = g.monic(fq);
        out.push(
            g.div_exact(fq, &prev)
                .expect("determinantal divisors form a chain"),
        );
        prev = g;
    }
    out
}

/// All `k`-element subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
