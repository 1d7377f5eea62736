//! Table-driven finite fields `F_q`, `q = p^e0 <= 2^16`.
//!
//! An element is stored as its index: the base-`p` digits of the index are
//! the coefficients (ascending) of a polynomial in `x` reduced modulo the
//! field's primitive polynomial. The primitive polynomial is the first
//! primitive one in index order, so the encoding is reproducible.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element of `F_q`, identified by its table index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const ADD_TABLE_LIMIT: u32 = 1024;

struct FieldTables {
    p: u32,
    e0: u32,
    q: u32,
    /// Coefficients of the primitive polynomial, ascending, monic.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u16>>,
}

/// Shared handle to a finite field. Cloning is cheap.
#[derive(Clone)]
pub struct Fq(Arc<FieldTables>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.q() == other.q() && self.0.modulus == other.0.modulus)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn digits(mut v: u32, p: u32, e0: u32) -> Vec<u32> {
    (0..e0)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiplies the digit vector by `x` modulo the monic `modulus` of degree `e0`.
fn times_x(v: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e0 = v.len();
    let top = v[e0 - 1];
    let mut out = vec![0; e0];
    for i in (1..e0).rev() {
        out[i] = v[i - 1];
    }
    if top != 0 {
        for i in 0..e0 {
            out[i] = (out[i] + p - (top * modulus[i]) % p) % p;
        }
    }
    out
}

impl Fq {
    /// Builds `F_q` for `q = p^e0`.
    pub fn new(q: u32) -> Result<Fq> {
        if !(2..=1 << 16).contains(&q) {
            return Err(Error::InvalidField(format!("q = {q} outside 2..=65536")));
        }
        let p = (2..=q).find(|d| q % d == 0).unwrap();
        let mut e0 = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e0 += 1;
        }
        if rest != 1 || !is_prime(p) {
            return Err(Error::InvalidField(format!("q = {q} is not a prime power")));
        }
        let field = Fq(Arc::new(Self::build(p, e0)));
        field.self_check()?;
        Ok(field)
    }

    fn build(p: u32, e0: u32) -> FieldTables {
        let q = p.pow(e0);
        // Search monic polynomials of degree e0 in index order for one in which x
        // has multiplicative order q - 1.
        let mut modulus = Vec::new();
        let mut exp = Vec::new();
        for low in 0..q {
            let mut cand = digits(low, p, e0);
            if cand[0] == 0 {
                continue;
            }
            cand.push(1);
            let one = {
                let mut o = vec![0; e0 as usize];
                o[0] = 1;
                o
            };
            let x = if e0 == 1 {
                // F_p: x reduces to -cand[0]
                vec![(p - cand[0]) % p]
            } else {
                let mut v = vec![0; e0 as usize];
                v[1] = 1;
                v
            };
            let mut table = Vec::with_capacity(q as usize - 1);
            let mut cur = one.clone();
            let mut ok = true;
            for i in 0..q - 1 {
                if i > 0 && cur == one {
                    ok = false;
                    break;
                }
                table.push(undigits(&cur, p));
                cur = if e0 == 1 {
                    vec![(cur[0] * x[0]) % p]
                } else {
                    times_x(&cur, &cand, p)
                };
            }
            if ok && cur == one {
                modulus = cand;
                exp = table;
                break;
            }
        }
        let mut log = vec![0u32; q as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let neg: Vec<u32> = (0..q)
            .map(|v| {
                undigits(
                    &digits(v, p, e0)
                        .iter()
                        .map(|d| (p - d) % p)
                        .collect::<Vec<_>>(),
                    p,
                )
            })
            .collect();
        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, e0);
                for b in 0..q {
                    let db = digits(b, p, e0);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = undigits(&s, p) as u16;
                }
            }
            t
        });
        FieldTables {
            p,
            e0,
            q,
            modulus,
            exp,
            log,
            neg,
            add,
        }
    }

    fn self_check(&self) -> Result<()> {
        let q = self.q();
        let elems: Vec<FqElem> = (0..q).map(FqElem).collect();
        let bad = |what: &str| Err(Error::InvalidField(format!("field axiom failed: {what}")));
        if q <= 64 {
            for &a in &elems {
                if !self.add(a, self.neg(a)).is_zero() {
                    return bad("additive inverse");
                }
                if !a.is_zero() && self.mul(a, self.inv(a)) != self.one() {
                    return bad("multiplicative inverse");
                }
                for &b in &elems {
                    for &c in &elems {
                        if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                            return bad("additive associativity");
                        }
                        if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                            return bad("multiplicative associativity");
                        }
                        if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                            return bad("distributivity");
                        }
                    }
                }
            }
        } else {
            // Spot checks on a deterministic walk through the field.
            let mut s = 0x9e37_79b9u64;
            let mut next = || {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                FqElem((s % q as u64) as u32)
            };
            for _ in 0..4096 {
                let (a, b, c) = (next(), next(), next());
                if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                    || self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                {
                    return bad("spot check");
                }
                if !a.is_zero() && self.mul(a, self.inv(a)) != self.one() {
                    return bad("multiplicative inverse");
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn e0(&self) -> u32 {
        self.0.e0
    }

    /// Primitive polynomial in ascending coefficient order (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// One-line description of the field, including the defining polynomial.
    pub fn describe(&self) -> String {
        let m: Vec<String> = self.modulus().iter().map(|c| c.to_string()).collect();
        format!(
            "q={} p={} e0={} primitive=[{}]",
            self.q(),
            self.p(),
            self.e0(),
            m.join(" ")
        )
    }

    #[inline]
    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    #[inline]
    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// The primitive element `x` (a generator of `F_q^x`).
    pub fn generator(&self) -> FqElem {
        FqElem(self.0.exp[1 % (self.q() as usize - 1).max(1)])
    }

    /// The element with the given index, if in range.
    pub fn elem(&self, index: u32) -> Result<FqElem> {
        if index < self.q() {
            Ok(FqElem(index))
        } else {
            Err(Error::Parse(format!(
                "field index {index} out of range for q = {}",
                self.q()
            )))
        }
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p() as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q()).map(FqElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FqElem> {
        (1..self.q()).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let t = &self.0;
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        if t.p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        if let Some(add) = &t.add {
            return FqElem(add[(a.0 * t.q + b.0) as usize] as u32);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        for _ in 0..t.e0 {
            out += ((x % t.p + y % t.p) % t.p) * place;
            x /= t.p;
            y /= t.p;
            place *= t.p;
        }
        FqElem(out)
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        let t = &self.0;
        let n = t.q - 1;
        let e = (t.log[a.0 as usize] + t.log[b.0 as usize]) % n;
        FqElem(t.exp[e as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: FqElem) -> FqElem {
        assert!(!a.is_zero(), "inverse of zero in F_q");
        let t = &self.0;
        let n = t.q - 1;
        FqElem(t.exp[((n - t.log[a.0 as usize]) % n) as usize])
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> FqElem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return self.one();
        }
        if a.is_zero() {
            return a;
        }
        let t = &self.0;
        let n = (t.q - 1) as u64;
        FqElem(t.exp[((t.log[a.0 as usize] as u64 * (e % n)) % n) as usize])
    }

    /// Discrete logarithm to the base [`Fq::generator`].
    pub fn log(&self, a: FqElem) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields_build() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64] {
            let f = Fq::new(q).unwrap();
            assert_eq!(f.q(), q);
            assert_eq!(f.p().pow(f.e0()), q);
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(Fq::new(6).is_err());
        assert!(Fq::new(1).is_err());
        assert!(Fq::new(100).is_err());
    }

    #[test]
    fn generator_has_full_order() {
        let f = Fq::new(9).unwrap();
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = f.one();
        for _ in 0..8 {
            seen.insert(x);
            x = f.mul(x, g);
        }
        assert_eq!(seen.len(), 8);
        assert_eq!(x, f.one());
    }

    #[test]
    fn prime_field_matches_integers() {
        let f = Fq::new(7).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f.add(FqElem(a), FqElem(b)), FqElem((a + b) % 7));
                assert_eq!(f.mul(FqElem(a), FqElem(b)), FqElem((a * b) % 7));
            }
        }
    }

    #[test]
    fn frobenius_fixes_field() {
        let f = Fq::new(27).unwrap();
        for a in f.elements() {
            assert_eq!(f.pow(a, 27), a);
        }
    }

    #[test]
    fn large_field_spot_checked() {
        let f = Fq::new(1 << 12).unwrap();
        let a = FqElem(1234);
        assert_eq!(f.mul(a, f.inv(a)), f.one());
        assert_eq!(f.add(a, a), f.zero());
    }

    #[test]
    fn modulus_is_reproducible() {
        assert_eq!(Fq::new(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Fq::new(8).unwrap().modulus(), Fq::new(8).unwrap().modulus());
    }
}
