//! Reduction mod `p` and exhaustive closure of small matrix groups.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::SympMatrix;
use crate::error::{Error, Result};
use crate::int;

/// Enough for Sp(6, F₂), which has 1,451,520 elements.
pub const DEFAULT_BFS_CAP: usize = 5_000_000;

/// Square matrix with entries in `0..p` for a prime `p < 256`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModPMatrix {
    dim: usize,
    p: u8,
    entries: Vec<u8>,
}

impl ModPMatrix {
    pub fn reduce(m: &SympMatrix, p: u64) -> Result<Self> {
        let p8 = check_prime(p)?;
        let modulus = BigInt::from(p);
        let entries = m
            .as_int()
            .entries()
            .iter()
            .map(|x| {
                let r = ((x % &modulus) + &modulus) % &modulus;
                r.to_u8().expect("residue below 256")
            })
            .collect();
        Ok(ModPMatrix { dim: m.dim(), p: p8, entries })
    }

    pub fn identity(dim: usize, p: u64) -> Result<Self> {
        let p8 = check_prime(p)?;
        let mut entries = vec![0u8; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Ok(ModPMatrix { dim, p: p8, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> u64 {
        self.p as u64
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.dim + col]
    }

    pub fn mul(&self, rhs: &ModPMatrix) -> ModPMatrix {
        assert_eq!((self.dim, self.p), (rhs.dim, rhs.p), "incompatible mod-p matrices");
        let n = self.dim;
        let p = self.p as u32;
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: u32 = (0..n).map(|k| self.entries[i * n + k] as u32 * rhs.entries[k * n + j] as u32).sum();
                entries[i * n + j] = (s % p) as u8;
            }
        }
        ModPMatrix { dim: n, p: self.p, entries }
    }

    /// `Mᵀ J M ≡ J (mod p)`.
    pub fn preserves_form(&self) -> bool {
        let n = self.dim;
        if n % 2 != 0 {
            return false;
        }
        let p = self.p as i64;
        let col = |j: usize, k: usize| self.entries[k * n + j] as i64;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0i64;
                for k in (0..n).step_by(2) {
                    s += col(i, k) * col(j, k + 1) - col(i, k + 1) * col(j, k);
                }
                let expected = match (i % 2, j) {
                    (0, j) if j == i + 1 => 1,
                    (1, j) if j + 1 == i => -1,
                    _ => 0,
                };
                if (s - expected).rem_euclid(p) != 0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim;
        self.entries.iter().enumerate().all(|(k, &x)| x == u8::from(k / n == k % n))
    }
}

fn check_prime(p: u64) -> Result<u8> {
    let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if !is_prime || p > 255 {
        return Err(Error::Modulus(p));
    }
    Ok(p as u8)
}

/// `|Sp(2g, F_p)| = p^{g²} · ∏_{i=1..g} (p^{2i} − 1)`.
pub fn sp_order(genus: u32, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut order = num_traits::pow(p.clone(), (genus * genus) as usize);
    for i in 1..=genus {
        order *= num_traits::pow(p.clone(), 2 * i as usize) - BigInt::one();
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BfsStatus {
    Complete,
    /// The closure grew past the cap; `order` is only a lower bound.
    Inconclusive,
}

/// Outcome of [`subgroup_order_mod_p`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupOrder {
    pub prime: u64,
    pub genus: u32,
    pub status: BfsStatus,
    /// Elements found; exact when `status` is complete.
    pub order: u64,
    #[serde(serialize_with = "int::serialize_int", deserialize_with = "int::deserialize_int")]
    pub group_order: BigInt,
    pub full: bool,
}

impl GroupOrder {
    pub fn is_inconclusive(&self) -> bool {
        self.status == BfsStatus::Inconclusive
    }
}

/// Sparse form of `g - I` for a generator `g`; transvections have very few
/// nonzero entries there.
struct SparseGen {
    /// `(row, [(column, entry)])` for each nonzero row.
    rows: Vec<(usize, Vec<(usize, u32)>)>,
}

struct Packer {
    dim: usize,
    bits: u32,
    p: u32,
}

impl Packer {
    fn pack(&self, m: &[u8]) -> u128 {
        m.iter().fold(0u128, |acc, &x| (acc << self.bits) | x as u128)
    }

    fn unpack(&self, mut key: u128, out: &mut [u8]) {
        let mask = (1u128 << self.bits) - 1;
        for slot in out.iter_mut().rev() {
            *slot = (key & mask) as u8;
            key >>= self.bits;
        }
    }

    /// `out = g·x`, computed as `x + (g - I)·x`; only rows of `g - I` with
    /// nonzero entries are touched. `acc` is scratch space of one row.
    fn left_mul(&self, g: &SparseGen, x: &[u8], acc: &mut [u32], out: &mut [u8]) {
        let n = self.dim;
        out.copy_from_slice(x);
        for (i, terms) in &g.rows {
            for (a, &v) in acc.iter_mut().zip(&x[i * n..(i + 1) * n]) {
                *a = v as u32;
            }
            for &(k, v) in terms {
                for (a, &r) in acc.iter_mut().zip(&x[k * n..(k + 1) * n]) {
                    *a += v * r as u32;
                }
            }
            for (o, &a) in out[i * n..(i + 1) * n].iter_mut().zip(acc.iter()) {
                *o = (a % self.p) as u8;
            }
        }
    }
}

/// Order of the subgroup of `Sp(2g, F_p)` generated by the reductions of `gens`,
/// by breadth-first closure from the identity.
///
/// Stops once more than `cap` elements are known and reports an inconclusive
/// lower bound. A closure that fits in `cap` is counted exactly.
pub fn subgroup_order_mod_p(genus: u32, gens: &[SympMatrix], p: u64, cap: usize) -> Result<GroupOrder> {
    let dim = 2 * genus as usize;
    let identity = ModPMatrix::identity(dim, p)?;
    let bits = 8 - (identity.p - 1).leading_zeros();
    let bits = bits.max(1);
    if (dim * dim) as u32 * bits > 128 {
        return Err(Error::Domain(format!("Sp({dim}, F_{p}) is too large for exhaustive enumeration")));
    }
    let mut sparse = Vec::with_capacity(gens.len());
    for g in gens {
        if g.dim() != dim {
            return Err(Error::Dimension { expected: dim, found: g.dim() });
        }
        let m = ModPMatrix::reduce(g, p)?;
        let rows = (0..dim)
            .map(|i| {
                let terms: Vec<(usize, u32)> = (0..dim)
                    .filter_map(|k| {
                        let v = (m.get(i, k) as u64 + p - u64::from(i == k)) % p;
                        (v != 0).then_some((k, v as u32))
                    })
                    .collect();
                (i, terms)
            })
            .filter(|(_, terms)| !terms.is_empty())
            .collect();
        sparse.push(SparseGen { rows });
    }

    let packer = Packer { dim, bits, p: p as u32 };
    let start = packer.pack(&identity.entries);
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    let mut x = vec![0u8; dim * dim];
    let mut y = vec![0u8; dim * dim];
    let mut acc = vec![0u32; dim];
    let mut status = BfsStatus::Complete;

    'bfs: while let Some(key) = queue.pop_front() {
        packer.unpack(key, &mut x);
        for g in &sparse {
            packer.left_mul(g, &x, &mut acc, &mut y);
            let k = packer.pack(&y);
            if seen.insert(k) {
                if seen.len() > cap {
                    status = BfsStatus::Inconclusive;
                    break 'bfs;
                }
                queue.push_back(k);
            }
        }
    }

    let group_order = sp_order(genus, p);
    let order = seen.len() as u64;
    let full = status == BfsStatus::Complete && BigInt::from(order) == group_order;
    Ok(GroupOrder { prime: p, genus, status, order, group_order, full })
}
