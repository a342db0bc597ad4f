use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Deserializer;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::{is_primitive, pairing, HomologyClass};
use crate::error::{Error, Result};
use crate::int::{self, IntIn};

/// Square integer matrix, row-major. No structure is assumed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        IntMatrix { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        IntMatrix { dim, entries: vec![BigInt::zero(); dim * dim] }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension { expected: dim, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// The standard form: `g` diagonal blocks `[[0, 1], [-1, 0]]`.
    pub fn standard_form(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in (0..dim).step_by(2) {
            m.entries[i * dim + i + 1] = BigInt::one();
            m.entries[(i + 1) * dim + i] = -BigInt::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut BigInt {
        &mut self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.dim.max(1)).take(self.dim)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim;
        self.entries.iter().enumerate().all(|(k, x)| if k / n == k % n { x.is_one() } else { x.is_zero() })
    }

    pub fn mul_mat(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::Dimension { expected: self.dim, found: rhs.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &HomologyClass) -> Result<HomologyClass> {
        if v.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: v.len() });
        }
        let coords = self.rows().map(|row| row.iter().zip(v.coords()).map(|(a, b)| a * b).sum()).collect();
        HomologyClass::new(coords)
    }

    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(self)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }
}

/// Fraction-free Gaussian elimination; exact over Z.
fn bareiss_determinant(m: &IntMatrix) -> BigInt {
    let n = m.dim;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.entries.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
        }
        prev = a[k * n + k].clone();
    }
    sign * &a[n * n - 1]
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [BigInt]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                int::serialize_ints(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(self.dim))?;
        for row in self.rows() {
            seq.serialize_element(&Row(row))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<IntIn>> = Vec::deserialize(d)?;
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Integer matrix known to preserve the standard intersection form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SympMatrix(IntMatrix);

impl SympMatrix {
    pub fn identity(genus: u32) -> Self {
        SympMatrix(IntMatrix::identity(2 * genus as usize))
    }

    pub fn as_int(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_int(self) -> IntMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn genus(&self) -> u32 {
        (self.0.dim / 2) as u32
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn apply(&self, v: &HomologyClass) -> Result<HomologyClass> {
        self.0.mul_vec(v)
    }

    /// `self · rhs`: `rhs` acts first.
    pub fn compose(&self, rhs: &SympMatrix) -> Result<SympMatrix> {
        Ok(SympMatrix(self.0.mul_mat(&rhs.0)?))
    }

    /// `M⁻¹ = −J Mᵀ J`, exact.
    pub fn inverse(&self) -> SympMatrix {
        let n = self.0.dim;
        let t = self.0.transpose();
        // (J X)[i][j] = ±X[partner(i)][j]
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let (pi, si) = partner(i);
                let (pj, sj) = partner(j);
                let v = t.get(pi, pj);
                // −J Mᵀ J: row sign si, column sign −sj for J on the right, overall minus.
                let s = -(si * -sj);
                *out.get_mut(i, j) = if s > 0 { v.clone() } else { -v };
            }
        }
        SympMatrix(out)
    }

    pub fn pow(&self, mut e: u32) -> SympMatrix {
        let mut base = self.clone();
        let mut acc = SympMatrix::identity(self.genus());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("same dimension");
            }
            base = base.compose(&base).expect("same dimension");
            e >>= 1;
        }
        acc
    }

    /// Left-multiply by the transvection power `T_c^k` in place (rank-one update).
    pub(crate) fn apply_transvection_left(&mut self, c: &[BigInt], k: &BigInt) {
        let n = self.0.dim;
        let w = j_times(c);
        // row = wᵀ M
        let mut row = vec![BigInt::zero(); n];
        for (i, wi) in w.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            for (j, r) in row.iter_mut().enumerate() {
                *r += wi * self.0.get(i, j);
            }
        }
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let f = k * ci;
            for (j, r) in row.iter().enumerate() {
                if !r.is_zero() {
                    *self.0.get_mut(i, j) += &f * r;
                }
            }
        }
    }
}

impl TryFrom<IntMatrix> for SympMatrix {
    type Error = Error;

    fn try_from(m: IntMatrix) -> Result<Self> {
        if m.dim % 2 != 0 {
            return Err(Error::Domain(format!("odd dimension {}", m.dim)));
        }
        if !is_symplectic(&m) {
            return Err(Error::Domain("matrix does not preserve the intersection form".into()));
        }
        Ok(SympMatrix(m))
    }
}

impl<'de> Deserialize<'de> for SympMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SympMatrix::try_from(IntMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Mul for &SympMatrix {
    type Output = SympMatrix;

    fn mul(self, rhs: &SympMatrix) -> SympMatrix {
        self.compose(rhs).expect("symplectic matrices of different genus")
    }
}

impl fmt::Display for SympMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Index paired with `i` by the form, and the sign of `J[i][partner]`.
fn partner(i: usize) -> (usize, i32) {
    if i % 2 == 0 {
        (i + 1, 1)
    } else {
        (i - 1, -1)
    }
}

/// `J c`, so that `⟨x, c⟩ = (J c) · x`.
fn j_times(c: &[BigInt]) -> Vec<BigInt> {
    (0..c.len())
        .map(|i| {
            let (p, s) = partner(i);
            if s > 0 {
                c[p].clone()
            } else {
                -&c[p]
            }
        })
        .collect()
}

/// Matrix of `x ↦ x + sign·⟨x, c⟩·c`; `sign = +1` is a positive Dehn twist.
pub fn transvection(c: &HomologyClass, sign: i32) -> SympMatrix {
    let k = BigInt::from(sign.signum());
    let mut m = SympMatrix::identity(c.genus());
    m.apply_transvection_left(c.coords(), &k);
    m
}

/// True iff `Mᵀ J M = J`.
pub fn is_symplectic(m: &IntMatrix) -> bool {
    let n = m.dim;
    if n % 2 != 0 {
        return false;
    }
    // (Mᵀ J M)[i][j] = ⟨col_i, col_j⟩
    let cols = m.transpose();
    let cols: Vec<&[BigInt]> = cols.rows().collect();
    for i in 0..n {
        for j in i..n {
            let v = pairing(cols[i], cols[j]);
            let expected = if j == i + 1 && i % 2 == 0 { BigInt::one() } else { BigInt::zero() };
            if v != expected {
                return false;
            }
        }
    }
    true
}

/// Deterministic symplectic `U` with `U·v = a₁`, assembled from transvection powers.
///
/// Each hyperbolic pair is reduced by a Euclidean sweep with `T_{aᵢ}`, `T_{bᵢ}`;
/// pair `j > 1` is then folded into pair 1 by commuting triples such as
/// `T_{a₁}⁻ᵏ T_{aⱼ}⁻ᵏ T_{a₁+aⱼ}ᵏ`, which shear `x_{a₁}` by `y_{bⱼ}` and back.
pub fn map_primitive_to_e1(v: &HomologyClass) -> Result<SympMatrix> {
    if !is_primitive(v) {
        return Err(Error::Domain(format!("class {v} is not primitive")));
    }
    let mut r = Reducer { v: v.coords().to_vec(), u: SympMatrix::identity(v.genus()) };
    let g = v.len() / 2;

    r.pair_to_a(0);
    for j in 1..g {
        r.pair_to_b(j);
        r.fold_into_first(j);
    }
    if r.v[0].is_negative() {
        // (T_{b₁} T_{a₁})³ = −I on the first pair
        for _ in 0..3 {
            r.twist(&[(0, 1)], 1);
            r.twist(&[(1, 1)], 1);
        }
    }
    debug_assert!(r.v[0].is_one() && r.v[1..].iter().all(Zero::is_zero));
    Ok(r.u)
}

struct Reducer {
    v: Vec<BigInt>,
    u: SympMatrix,
}

impl Reducer {
    /// Apply `T_c^k` with `c = Σ coeff·e_slot` to both the vector and `U`.
    fn twist(&mut self, support: &[(usize, i64)], k: impl Into<BigInt>) {
        let k = k.into();
        if k.is_zero() {
            return;
        }
        let mut c = vec![BigInt::zero(); self.v.len()];
        for &(slot, coeff) in support {
            c[slot] = coeff.into();
        }
        let t = pairing(&self.v, &c) * &k;
        for (x, ci) in self.v.iter_mut().zip(&c) {
            *x += &t * ci;
        }
        self.u.apply_transvection_left(&c, &k);
    }

    fn xy(&self, pair: usize) -> (BigInt, BigInt) {
        (self.v[2 * pair].clone(), self.v[2 * pair + 1].clone())
    }

    // T_{a}^k: x -= k y.   T_{b}^k: y += k x.

    fn pair_to_a(&mut self, p: usize) {
        let (a, b) = (2 * p, 2 * p + 1);
        loop {
            let (x, y) = self.xy(p);
            if y.is_zero() {
                return;
            }
            if x.is_zero() {
                self.twist(&[(a, 1)], -1);
                self.twist(&[(b, 1)], -1);
                return;
            }
            self.twist(&[(a, 1)], x.div_floor(&y));
            let (x, y) = self.xy(p);
            if !x.is_zero() {
                self.twist(&[(b, 1)], -y.div_floor(&x));
            }
        }
    }

    fn pair_to_b(&mut self, p: usize) {
        let (a, b) = (2 * p, 2 * p + 1);
        loop {
            let (x, y) = self.xy(p);
            if x.is_zero() {
                return;
            }
            if y.is_zero() {
                self.twist(&[(b, 1)], 1);
                self.twist(&[(a, 1)], 1);
                return;
            }
            self.twist(&[(b, 1)], -y.div_floor(&x));
            let (x, y) = self.xy(p);
            if !y.is_zero() {
                self.twist(&[(a, 1)], x.div_floor(&y));
            }
        }
    }

    /// x₁ -= k·y_j, leaving every other coordinate fixed (given y₁ = x_j = 0).
    fn shear_a(&mut self, j: usize, k: &BigInt) {
        let aj = 2 * j;
        self.twist(&[(0, 1)], -k);
        self.twist(&[(aj, 1)], -k);
        self.twist(&[(0, 1), (aj, 1)], k.clone());
    }

    /// y_j += k·x₁, leaving every other coordinate fixed (given y₁ = x_j = 0).
    fn shear_b(&mut self, j: usize, k: &BigInt) {
        let bj = 2 * j + 1;
        self.twist(&[(1, 1)], -k);
        self.twist(&[(bj, 1)], -k);
        self.twist(&[(1, 1), (bj, 1)], k.clone());
    }

    fn fold_into_first(&mut self, j: usize) {
        let bj = 2 * j + 1;
        loop {
            let (x, y) = (self.v[0].clone(), self.v[bj].clone());
            if y.is_zero() {
                return;
            }
            if x.is_zero() {
                self.shear_a(j, &BigInt::from(-1));
                self.shear_b(j, &BigInt::from(-1));
                return;
            }
            self.shear_a(j, &x.div_floor(&y));
            let (x, y) = (self.v[0].clone(), self.v[bj].clone());
            if !x.is_zero() {
                self.shear_b(j, &-y.div_floor(&x));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::intersection_number;
    use proptest::prelude::*;

    fn cls(v: &[i64]) -> HomologyClass {
        HomologyClass::from_i64s(v).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn transvection_of_a_on_torus() {
        let t = transvection(&HomologyClass::a(1, 1), 1);
        assert_eq!(t.as_int(), &mat(&[&[1, -1], &[0, 1]]));
        let t = transvection(&HomologyClass::b(1, 1), 1);
        assert_eq!(t.as_int(), &mat(&[&[1, 0], &[1, 1]]));
    }

    #[test]
    fn zero_class_gives_identity() {
        assert!(transvection(&HomologyClass::zero(3), 1).is_identity());
    }

    #[test]
    fn kernel_of_pairing_is_fixed() {
        let c = cls(&[1, 0, 1, 0]);
        let x = cls(&[3, 0, -2, 0]);
        assert_eq!(intersection_number(&x, &c).unwrap(), BigInt::zero());
        assert_eq!(transvection(&c, 1).apply(&x).unwrap(), x);
    }

    #[test]
    fn symplectic_checks() {
        assert!(is_symplectic(&IntMatrix::identity(4)));
        assert!(!is_symplectic(&mat(&[&[2, 0], &[0, 1]])));
        assert!(!is_symplectic(&mat(&[&[2, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])));
        assert!(!is_symplectic(&mat(&[&[1]])));
        assert!(SympMatrix::try_from(mat(&[&[2, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(mat(&[&[2, 0], &[0, 1]]).determinant(), BigInt::from(2));
        assert_eq!(mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).determinant(), BigInt::from(-5));
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).determinant(), BigInt::zero());
    }

    #[test]
    fn e1_maps_by_identity() {
        assert!(map_primitive_to_e1(&cls(&[1, 0, 0, 0])).unwrap().is_identity());
    }

    #[test]
    fn b1_on_torus() {
        let u = map_primitive_to_e1(&cls(&[0, 1])).unwrap();
        assert_eq!(u.apply(&cls(&[0, 1])).unwrap(), cls(&[1, 0]));
        assert!(is_symplectic(u.as_int()));
        assert_eq!(u.as_int().determinant(), BigInt::one());
    }

    #[test]
    fn negative_e1() {
        let u = map_primitive_to_e1(&cls(&[-1, 0, 0, 0])).unwrap();
        assert_eq!(u.apply(&cls(&[-1, 0, 0, 0])).unwrap(), cls(&[1, 0, 0, 0]));
    }

    #[test]
    fn non_primitive_rejected() {
        assert!(matches!(map_primitive_to_e1(&cls(&[2, 4])), Err(Error::Domain(_))));
        assert!(matches!(map_primitive_to_e1(&cls(&[0, 0])), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_and_pow() {
        let t = transvection(&cls(&[1, 2, -1, 3]), 1);
        assert!((&t * &t.inverse()).is_identity());
        assert_eq!(t.inverse(), transvection(&cls(&[1, 2, -1, 3]), -1));
        assert_eq!(t.pow(3), &t * &(&t * &t));
        assert!(t.pow(0).is_identity());
    }

    #[test]
    fn large_entries_do_not_overflow() {
        // trace > 2, so powers grow exponentially
        let t = &transvection(&cls(&[1, 0, 0, 0]), 1) * &transvection(&cls(&[0, 1, 0, 0]), -1);
        let big = t.pow(60);
        assert!(is_symplectic(big.as_int()));
        assert!(big.as_int().entries().iter().any(|x| x.bits() > 64));
    }

    fn vecs(g: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-9i64..=9, 2 * g)
    }

    proptest! {
        #[test]
        fn transvection_is_symplectic(c in (1usize..=3).prop_flat_map(vecs), s in prop_oneof![Just(1), Just(-1)]) {
            let c = cls(&c);
            let t = transvection(&c, s);
            prop_assert!(is_symplectic(t.as_int()));
            prop_assert_eq!(t.as_int().determinant(), BigInt::one());
            prop_assert!((&t * &transvection(&c, -s)).is_identity());
        }

        #[test]
        fn transvection_is_equivariant(
            (c, w) in (1usize..=3).prop_flat_map(|g| (vecs(g), vecs(g))),
        ) {
            let c = cls(&c);
            let w = cls(&w);
            // random symplectic U as a product of a few transvections
            let u = &transvection(&w, 1) * &transvection(&c.add(&w).unwrap(), -1);
            let lhs = transvection(&u.apply(&c).unwrap(), 1);
            let rhs = &(&u * &transvection(&c, 1)) * &u.inverse();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduction_postconditions(v in (1usize..=3).prop_flat_map(vecs)) {
            let v = cls(&v);
            prop_assume!(is_primitive(&v));
            let u = map_primitive_to_e1(&v).unwrap();
            prop_assert_eq!(u.apply(&v).unwrap(), HomologyClass::a(v.genus(), 1));
            prop_assert!(is_symplectic(u.as_int()));
            prop_assert_eq!(map_primitive_to_e1(&v).unwrap(), u);
        }
    }
}
