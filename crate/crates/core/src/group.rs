//! Exact finite groups with dense `u32` element indices.
//!
//! Two representations are supported: products of cyclic groups (mixed-radix
//! element encoding, least-significant modulus first) and explicit Cayley
//! tables. Cayley tables are fully validated at construction (associativity,
//! latin-square rows/columns, identity, two-sided inverses) up to order 512;
//! larger tables are rejected unless the caller passes `trusted`.

use crate::error::{Error, Result};
use num_integer::Integer;

/// Default hard cap on group order; the CLI can override it via the
/// `SDL_MAX_ORDER` environment variable.
pub const DEFAULT_MAX_ORDER: usize = 4096;

/// Mandatory-validation threshold for Cayley tables.
pub const CAYLEY_VALIDATION_LIMIT: usize = 512;

#[derive(Debug, Clone)]
pub enum GroupRepr {
    Abelian { moduli: Vec<u32> },
    Cayley { table: Vec<u32>, identity: u32 },
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    repr: GroupRepr,
    order: usize,
    inverse: Vec<u32>,
    exponent: u64,
    abelian: bool,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        if self.order != other.order {
            return false;
        }
        match (&self.repr, &other.repr) {
            (GroupRepr::Abelian { moduli: a }, GroupRepr::Abelian { moduli: b }) => a == b,
            (GroupRepr::Cayley { table: a, identity: ia }, GroupRepr::Cayley { table: b, identity: ib }) => {
                ia == ib && a == b
            }
            _ => false,
        }
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Product of cyclic groups `Z_{m_1} x ... x Z_{m_r}`.
    pub fn abelian(moduli: &[u32]) -> Result<Self> {
        Self::abelian_with_cap(moduli, DEFAULT_MAX_ORDER)
    }

    pub fn abelian_with_cap(moduli: &[u32], max_order: usize) -> Result<Self> {
        let mut order: usize = 1;
        for &m in moduli {
            if m < 2 {
                return Err(Error::input(format!("modulus {m} < 2")));
            }
            order = order
                .checked_mul(m as usize)
                .filter(|&o| o <= max_order)
                .ok_or_else(|| Error::capacity(format!("group order exceeds cap {max_order}")))?;
        }
        let repr = GroupRepr::Abelian {
            moduli: moduli.to_vec(),
        };
        let mut g = FiniteGroup {
            repr,
            order,
            inverse: Vec::new(),
            exponent: 0,
            abelian: true,
        };
        g.inverse = (0..order as u32).map(|x| g.raw_inv(x)).collect();
        g.exponent = moduli.iter().fold(1u64, |acc, &m| acc.lcm(&(m as u64)));
        Ok(g)
    }

    /// Group from an explicit Cayley table, `table[a][b] = a*b`.
    pub fn from_cayley(table: &[Vec<u32>], identity: u32, trusted: bool) -> Result<Self> {
        Self::from_cayley_with_cap(table, identity, trusted, DEFAULT_MAX_ORDER)
    }

    pub fn from_cayley_with_cap(
        table: &[Vec<u32>],
        identity: u32,
        trusted: bool,
        max_order: usize,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::input("empty cayley table"));
        }
        if n > max_order {
            return Err(Error::capacity(format!(
                "cayley order {n} exceeds cap {max_order}"
            )));
        }
        if identity as usize >= n {
            return Err(Error::input(format!("identity index {identity} out of range")));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(Error::input("cayley table is not square"));
            }
            for &x in row {
                if x as usize >= n {
                    return Err(Error::input(format!("cayley entry {x} out of range")));
                }
                flat.push(x);
            }
        }
        if n <= CAYLEY_VALIDATION_LIMIT {
            validate_cayley(&flat, n, identity)?;
        } else if !trusted {
            return Err(Error::capacity(format!(
                "cayley validation above order {CAYLEY_VALIDATION_LIMIT} requires the trusted flag"
            )));
        }
        let mut g = FiniteGroup {
            repr: GroupRepr::Cayley { table: flat, identity },
            order: n,
            inverse: Vec::new(),
            exponent: 0,
            abelian: false,
        };
        let mut inverse = vec![u32::MAX; n];
        for a in 0..n as u32 {
            let mut found = None;
            for b in 0..n as u32 {
                if g.raw_op(a, b) == identity && g.raw_op(b, a) == identity {
                    found = Some(b);
                    break;
                }
            }
            inverse[a as usize] = found.ok_or(Error::NoInverse { element: a })?;
        }
        g.inverse = inverse;
        g.abelian = (0..n as u32)
            .all(|a| (0..n as u32).all(|b| g.raw_op(a, b) == g.raw_op(b, a)));
        g.exponent = (0..n as u32)
            .map(|x| g.element_order(x).unwrap())
            .fold(1u64, |acc, o| acc.lcm(&o));
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn repr(&self) -> &GroupRepr {
        &self.repr
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// lcm of all element orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn identity(&self) -> u32 {
        match &self.repr {
            GroupRepr::Abelian { .. } => 0,
            GroupRepr::Cayley { identity, .. } => *identity,
        }
    }

    fn raw_op(&self, a: u32, b: u32) -> u32 {
        match &self.repr {
            GroupRepr::Abelian { moduli } => {
                let (mut x, mut y) = (a, b);
                let mut out = 0u32;
                let mut place = 1u32;
                for &m in moduli {
                    let xa = x % m;
                    let ya = y % m;
                    out += ((xa + ya) % m) * place;
                    x /= m;
                    y /= m;
                    place *= m;
                }
                out
            }
            GroupRepr::Cayley { table, .. } => table[a as usize * self.order + b as usize],
        }
    }

    fn raw_inv(&self, a: u32) -> u32 {
        match &self.repr {
            GroupRepr::Abelian { moduli } => {
                let mut x = a;
                let mut out = 0u32;
                let mut place = 1u32;
                for &m in moduli {
                    let xa = x % m;
                    out += ((m - xa) % m) * place;
                    x /= m;
                    place *= m;
                }
                out
            }
            GroupRepr::Cayley { .. } => self.inverse[a as usize],
        }
    }

    pub fn op(&self, a: u32, b: u32) -> u32 {
        debug_assert!((a as usize) < self.order && (b as usize) < self.order);
        self.raw_op(a, b)
    }

    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!((a as usize) < self.order);
        self.inverse[a as usize]
    }

    pub fn check_element(&self, a: u32) -> Result<()> {
        if (a as usize) < self.order {
            Ok(())
        } else {
            Err(Error::input(format!(
                "element index {a} out of range for group of order {}",
                self.order
            )))
        }
    }

    /// `g^n` for any signed n.
    pub fn pow(&self, g: u32, n: i64) -> u32 {
        let (mut base, mut n) = if n < 0 {
            (self.inv(g), (-n) as u64)
        } else {
            (g, n as u64)
        };
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.op(acc, base);
            }
            base = self.op(base, base);
            n >>= 1;
        }
        acc
    }

    /// Least n >= 1 with `g^n = 1`.
    pub fn element_order(&self, g: u32) -> Result<u64> {
        self.check_element(g)?;
        let e = self.identity();
        let mut x = g;
        let mut n = 1u64;
        while x != e {
            x = self.op(x, g);
            n += 1;
        }
        Ok(n)
    }

    /// Commutator `[a,b] = a^{-1} b^{-1} a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.op(self.op(self.inv(a), self.inv(b)), self.op(a, b))
    }

    /// Conjugate `g h g^{-1}`.
    pub fn conjugate(&self, g: u32, h: u32) -> u32 {
        self.op(self.op(g, h), self.inv(g))
    }

    /// Decode an abelian element index into its tuple of coordinates.
    pub fn decode(&self, idx: u32) -> Vec<u32> {
        match &self.repr {
            GroupRepr::Abelian { moduli } => {
                let mut x = idx;
                moduli
                    .iter()
                    .map(|&m| {
                        let c = x % m;
                        x /= m;
                        c
                    })
                    .collect()
            }
            GroupRepr::Cayley { .. } => vec![idx],
        }
    }

    /// Encode abelian coordinates into an element index.
    pub fn encode(&self, coords: &[u32]) -> Result<u32> {
        match &self.repr {
            GroupRepr::Abelian { moduli } => {
                if coords.len() != moduli.len() {
                    return Err(Error::input("coordinate arity mismatch"));
                }
                let mut out = 0u32;
                let mut place = 1u32;
                for (&c, &m) in coords.iter().zip(moduli) {
                    if c >= m {
                        return Err(Error::input(format!("coordinate {c} >= modulus {m}")));
                    }
                    out += c * place;
                    place *= m;
                }
                Ok(out)
            }
            GroupRepr::Cayley { .. } => Err(Error::input("encode on non-abelian group")),
        }
    }

    pub fn moduli(&self) -> Option<&[u32]> {
        match &self.repr {
            GroupRepr::Abelian { moduli } => Some(moduli),
            GroupRepr::Cayley { .. } => None,
        }
    }

    /// True when the group is `Z_2^n` or `Z_p^n`-like: every modulus equals 2.
    pub fn is_elementary_two(&self) -> bool {
        match &self.repr {
            GroupRepr::Abelian { moduli } => moduli.iter().all(|&m| m == 2),
            GroupRepr::Cayley { .. } => false,
        }
    }
}

fn validate_cayley(table: &[u32], n: usize, identity: u32) -> Result<()> {
    let at = |a: usize, b: usize| table[a * n + b] as usize;
    let e = identity as usize;
    for a in 0..n {
        if at(e, a) != a || at(a, e) != a {
            return Err(Error::BadIdentity {
                identity,
                witness: a as u32,
            });
        }
    }
    let mut seen = vec![false; n];
    for a in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for b in 0..n {
            let x = at(a, b);
            if seen[x] {
                return Err(Error::NotLatinSquare {
                    what: "row",
                    index: a as u32,
                });
            }
            seen[x] = true;
        }
    }
    for b in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for a in 0..n {
            let x = at(a, b);
            if seen[x] {
                return Err(Error::NotLatinSquare {
                    what: "column",
                    index: b as u32,
                });
            }
            seen[x] = true;
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(Error::NotAssociative {
                        a: a as u32,
                        b: b as u32,
                        c: c as u32,
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod test_groups {
    use super::*;

    /// Symmetric group S3 as a Cayley table; index 0 is the identity and the
    /// permutations are ordered [e, (12), (13), (23), (123), (132)].
    pub fn s3() -> FiniteGroup {
        let perms: Vec<[u8; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let compose = |p: &[u8; 3], q: &[u8; 3]| -> [u8; 3] {
            // (p*q)(x) = p(q(x))
            [p[q[0] as usize], p[q[1] as usize], p[q[2] as usize]]
        };
        let idx = |r: &[u8; 3]| perms.iter().position(|p| p == r).unwrap() as u32;
        let table: Vec<Vec<u32>> = perms
            .iter()
            .map(|p| perms.iter().map(|q| idx(&compose(p, q))).collect())
            .collect();
        FiniteGroup::from_cayley(&table, 0, false).unwrap()
    }

    /// Heisenberg group mod 3: triples (a,b,c) with
    /// (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b'), encoded as a+3b+9c.
    pub fn heisenberg3() -> FiniteGroup {
        let enc = |a: u32, b: u32, c: u32| a + 3 * b + 9 * c;
        let mut table = vec![vec![0u32; 27]; 27];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for a2 in 0..3 {
                        for b2 in 0..3 {
                            for c2 in 0..3 {
                                let x = enc(a, b, c) as usize;
                                let y = enc(a2, b2, c2) as usize;
                                table[x][y] =
                                    enc((a + a2) % 3, (b + b2) % 3, (c + c2 + a * b2) % 3);
                            }
                        }
                    }
                }
            }
        }
        FiniteGroup::from_cayley(&table, 0, false).unwrap()
    }
}
