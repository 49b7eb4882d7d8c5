//! The field F₁₆ = F₂[α]/(α⁴+α+1) and q-linearized polynomials over it.
//!
//! F₁₆ serves as the coefficient field for the q-polynomials behind the
//! Gabidulin construction; elements are stored in the polynomial basis
//! {1, α, α², α³}, so the four value bits are the coordinates of an element
//! over F₂.

use super::BitMatrix;

/// An element of F₁₆ in the polynomial basis over F₂ (modulus α⁴+α+1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gf16(u8);

impl Gf16 {
    pub const ZERO: Gf16 = Gf16(0);
    pub const ONE: Gf16 = Gf16(1);

    /// Wraps a 4-bit value.
    pub fn new(value: u8) -> Self {
        assert!(value < 16, "F16 elements are 4-bit values");
        Gf16(value)
    }

    /// The generator α of the multiplicative group (order 15).
    pub fn generator() -> Self {
        Gf16(2)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// All 16 field elements in value order.
    pub fn all() -> impl Iterator<Item = Gf16> {
        (0..16).map(Gf16)
    }

    pub fn add(self, rhs: Gf16) -> Gf16 {
        Gf16(self.0 ^ rhs.0)
    }

    pub fn mul(self, rhs: Gf16) -> Gf16 {
        // Carryless 4x4-bit product, then reduction by α⁴ = α + 1.
        let mut prod: u16 = 0;
        for i in 0..4 {
            if (self.0 >> i) & 1 == 1 {
                prod ^= (rhs.0 as u16) << i;
            }
        }
        for j in (4..8).rev() {
            if (prod >> j) & 1 == 1 {
                prod ^= 1 << j;
                prod ^= 0b11 << (j - 4);
            }
        }
        Gf16(prod as u8)
    }

    /// The Frobenius endomorphism x ↦ x² (the q-power map for q = 2).
    pub fn frobenius(self) -> Gf16 {
        self.mul(self)
    }

    pub fn pow(self, mut e: u32) -> Gf16 {
        let mut base = self;
        let mut acc = Gf16::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self) -> Gf16 {
        assert!(!self.is_zero(), "zero has no inverse");
        self.pow(14)
    }
}

/// A 2-linearized polynomial Σ aᵢ x^(2^i) with coefficients in F₁₆.
///
/// Evaluation is F₂-linear on F₁₆, so every such polynomial defines a 4×4
/// matrix over F₂ once the basis {1, α, α², α³} is fixed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearizedPoly {
    coeffs: Vec<Gf16>,
}

impl LinearizedPoly {
    /// Polynomial with `coeffs[i]` the coefficient of x^(2^i).
    pub fn new(coeffs: Vec<Gf16>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Gf16] {
        &self.coeffs
    }

    pub fn eval(&self, x: Gf16) -> Gf16 {
        let mut acc = Gf16::ZERO;
        let mut power = x; // x^(2^i)
        for &c in &self.coeffs {
            acc = acc.add(c.mul(power));
            power = power.frobenius();
        }
        acc
    }

    pub fn add(&self, rhs: &LinearizedPoly) -> LinearizedPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[Gf16], i: usize| v.get(i).copied().unwrap_or(Gf16::ZERO);
        LinearizedPoly {
            coeffs: (0..n)
                .map(|i| get(&self.coeffs, i).add(get(&rhs.coeffs, i)))
                .collect(),
        }
    }

    /// The matrix of the induced F₂-linear map in the basis {1, α, α², α³}:
    /// row `i` holds the coordinates of `p(αⁱ)`.
    pub fn matrix(&self) -> BitMatrix {
        let rows = (0..4)
            .map(|i| self.eval(Gf16::new(1 << i)).value() as u64)
            .collect();
        BitMatrix::from_rows(rows, 4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn generator_times_inverse_is_one() {
        let a = Gf16::generator();
        assert_eq!(a.mul(a.inv()), Gf16::ONE);
    }

    #[test]
    fn frobenius_has_order_four() {
        for g in Gf16::all() {
            let mut x = g;
            for _ in 0..4 {
                x = x.frobenius();
            }
            assert_eq!(x, g);
        }
        // ... and order exactly four: squaring twice is not the identity.
        let a = Gf16::generator();
        assert_ne!(a.frobenius().frobenius(), a);
    }

    #[test]
    fn product_reduces_by_the_modulus() {
        // α³ · α² = α⁵ = α² + α.
        let a = Gf16::generator();
        assert_eq!(a.pow(3).mul(a.pow(2)), Gf16::new(0b0110));
    }

    #[test]
    fn nonzero_elements_form_a_cyclic_group_of_order_15() {
        let a = Gf16::generator();
        let mut seen = std::collections::BTreeSet::new();
        for e in 0..15 {
            seen.insert(a.pow(e).value());
        }
        assert_eq!(seen.len(), 15);
        for g in Gf16::all().filter(|g| !g.is_zero()) {
            assert_eq!(g.pow(15), Gf16::ONE);
        }
    }

    #[test]
    fn identity_poly_has_identity_matrix() {
        let p = LinearizedPoly::new(vec![Gf16::ONE]);
        assert_eq!(p.matrix(), BitMatrix::identity(4));
    }

    #[test]
    fn zero_poly_has_zero_matrix() {
        assert_eq!(LinearizedPoly::zero().matrix(), BitMatrix::zero(4, 4));
    }

    #[test]
    fn frobenius_matrix_has_order_four() {
        let frob = LinearizedPoly::new(vec![Gf16::ZERO, Gf16::ONE]).matrix();
        assert_eq!(frob.rank(), 4);
        let squared = frob.mul(&frob);
        assert_eq!(squared.mul(&squared), BitMatrix::identity(4));
        assert_ne!(squared, BitMatrix::identity(4));
    }

    proptest! {
        #[test]
        fn multiplication_is_commutative_and_associative(
            a in 0u8..16, b in 0u8..16, c in 0u8..16,
        ) {
            let (a, b, c) = (Gf16::new(a), Gf16::new(b), Gf16::new(c));
            prop_assert_eq!(a.mul(b), b.mul(a));
            prop_assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
        }

        #[test]
        fn matrix_map_is_additive(
            a0 in 0u8..16, a1 in 0u8..16, b0 in 0u8..16, b1 in 0u8..16,
        ) {
            let p = LinearizedPoly::new(vec![Gf16::new(a0), Gf16::new(a1)]);
            let q = LinearizedPoly::new(vec![Gf16::new(b0), Gf16::new(b1)]);
            let sum = p.add(&q).matrix();
            let xor_rows: Vec<u64> = p
                .matrix()
                .rows()
                .iter()
                .zip(q.matrix().rows())
                .map(|(&x, &y)| x ^ y)
                .collect();
            prop_assert_eq!(sum, BitMatrix::from_rows(xor_rows, 4));
        }
    }
}
