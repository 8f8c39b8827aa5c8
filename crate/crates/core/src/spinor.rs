//! Pauli and Dirac matrices in the standard representation.
//!
//! `alpha_j = [[0, sigma_j], [sigma_j, 0]]`, `beta = diag(I2, -I2)` and
//! `tau = [[0, I2], [I2, 0]]`, all with entries in {0, ±1, ±i}.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

use crate::{Error, Result};

pub type Complex2Matrix = Matrix2<Complex64>;
pub type Complex4Matrix = Matrix4<Complex64>;
pub type Spinor2 = Vector2<Complex64>;
pub type Spinor4 = Vector4<Complex64>;
pub type Vector3 = nalgebra::Vector3<f64>;

const O: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli matrix `sigma_j`, `j` in 1..=3.
pub fn pauli(j: usize) -> Result<Complex2Matrix> {
    #[rustfmt::skip]
    let m = match j {
        1 => Matrix2::new(O, ONE,
                          ONE, O),
        2 => Matrix2::new(O, -I,
                          I, O),
        3 => Matrix2::new(ONE, O,
                          O, -ONE),
        _ => return Err(Error::IndexOutOfRange(j)),
    };
    Ok(m)
}

/// Assemble a 4x4 matrix from 2x2 blocks `[[a, b], [c, d]]`.
pub fn from_blocks(a: &Complex2Matrix, b: &Complex2Matrix, c: &Complex2Matrix, d: &Complex2Matrix) -> Complex4Matrix {
    let mut m = Complex4Matrix::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Upper-left, upper-right, lower-left and lower-right 2x2 blocks.
pub fn blocks(m: &Complex4Matrix) -> [Complex2Matrix; 4] {
    [
        m.fixed_view::<2, 2>(0, 0).into_owned(),
        m.fixed_view::<2, 2>(0, 2).into_owned(),
        m.fixed_view::<2, 2>(2, 0).into_owned(),
        m.fixed_view::<2, 2>(2, 2).into_owned(),
    ]
}

/// Dirac matrix `alpha_j`, `j` in 1..=3.
pub fn alpha(j: usize) -> Result<Complex4Matrix> {
    let s = pauli(j)?;
    let z = Complex2Matrix::zeros();
    Ok(from_blocks(&z, &s, &s, &z))
}

pub fn beta() -> Complex4Matrix {
    Complex4Matrix::from_diagonal(&Vector4::new(ONE, ONE, -ONE, -ONE))
}

/// Swap of upper and lower 2-spinors.
pub fn tau() -> Complex4Matrix {
    let z = Complex2Matrix::zeros();
    let e = Complex2Matrix::identity();
    from_blocks(&z, &e, &e, &z)
}

/// `sigma . v`.
pub fn sigma_dot(v: &Vector3) -> Complex2Matrix {
    let (x, y, z) = (v.x, v.y, v.z);
    Matrix2::new(Complex64::new(z, 0.0), Complex64::new(x, -y), Complex64::new(x, y), Complex64::new(-z, 0.0))
}

/// `alpha . v`.
pub fn alpha_dot(v: &Vector3) -> Complex4Matrix {
    let s = sigma_dot(v);
    let z = Complex2Matrix::zeros();
    from_blocks(&z, &s, &s, &z)
}

/// `(sigma . v) u` without forming the matrix.
#[inline]
pub fn sigma_dot_apply(v: &Vector3, u: &Spinor2) -> Spinor2 {
    let (x, y, z) = (v.x, v.y, v.z);
    Vector2::new(u[0] * z + u[1] * Complex64::new(x, -y), u[0] * Complex64::new(x, y) - u[1] * z)
}

pub fn anticommutator<const D: usize>(
    a: &nalgebra::SMatrix<Complex64, D, D>,
    b: &nalgebra::SMatrix<Complex64, D, D>,
) -> nalgebra::SMatrix<Complex64, D, D> {
    a * b + b * a
}

/// Stack two 2-spinors into a 4-spinor.
pub fn stack(upper: &Spinor2, lower: &Spinor2) -> Spinor4 {
    Vector4::new(upper[0], upper[1], lower[0], lower[1])
}

pub fn split(s: &Spinor4) -> (Spinor2, Spinor2) {
    (Vector2::new(s[0], s[1]), Vector2::new(s[2], s[3]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close<const D: usize>(a: &nalgebra::SMatrix<Complex64, D, D>, b: &nalgebra::SMatrix<Complex64, D, D>) -> bool {
        (a - b).iter().all(|z| z.norm() < 1e-14)
    }

    #[test]
    fn pauli_three_is_diagonal() {
        let s3 = pauli(3).unwrap();
        assert!(close(&s3, &Matrix2::new(ONE, O, O, -ONE)));
    }

    #[test]
    fn pauli_index_is_checked() {
        assert_eq!(pauli(0), Err(Error::IndexOutOfRange(0)));
        assert_eq!(pauli(4).unwrap_err(), Error::IndexOutOfRange(4));
        assert!(alpha(7).is_err());
    }

    #[test]
    fn pauli_squares_and_anticommutes() {
        for j in 1..=3 {
            let s = pauli(j).unwrap();
            assert!(close(&(s * s), &Complex2Matrix::identity()));
            assert!(close(&s.adjoint(), &s));
        }
        let (s1, s2) = (pauli(1).unwrap(), pauli(2).unwrap());
        assert!(close(&anticommutator(&s1, &s2), &Complex2Matrix::zeros()));
    }

    #[test]
    fn dirac_algebra() {
        let b = beta();
        assert!(close(&(b * b), &Complex4Matrix::identity()));
        for j in 1..=3 {
            let aj = alpha(j).unwrap();
            assert!(close(&aj.adjoint(), &aj));
            assert!(close(&anticommutator(&aj, &b), &Complex4Matrix::zeros()));
            for k in 1..=3 {
                let ak = alpha(k).unwrap();
                let expect =
                    if j == k { Complex4Matrix::identity() * Complex64::from(2.0) } else { Complex4Matrix::zeros() };
                assert!(close(&anticommutator(&aj, &ak), &expect));
            }
        }
    }

    #[test]
    fn tau_anticommutes_with_beta() {
        // entrywise product worked out by hand: tau*beta = [[0,-I],[I,0]]
        let tb = from_blocks(
            &Complex2Matrix::zeros(),
            &-Complex2Matrix::identity(),
            &Complex2Matrix::identity(),
            &Complex2Matrix::zeros(),
        );
        assert!(close(&(tau() * beta()), &tb));
        assert!(close(&(beta() * tau()), &-tb));
        assert!(close(&anticommutator(&tau(), &beta()), &Complex4Matrix::zeros()));
    }

    #[test]
    fn dot_products() {
        let e3 = Vector3::new(0.0, 0.0, 1.0);
        assert!(close(&sigma_dot(&e3), &pauli(3).unwrap()));
        let a = alpha_dot(&e3);
        let [ul, ur, ll, lr] = blocks(&a);
        assert!(close(&ul, &Complex2Matrix::zeros()));
        assert!(close(&lr, &Complex2Matrix::zeros()));
        assert!(close(&ur, &pauli(3).unwrap()));
        assert!(close(&ll, &pauli(3).unwrap()));

        let v = Vector3::new(0.3, -1.2, 2.0);
        let by_sum = pauli(1).unwrap() * Complex64::from(v.x)
            + pauli(2).unwrap() * Complex64::from(v.y)
            + pauli(3).unwrap() * Complex64::from(v.z);
        assert!(close(&sigma_dot(&v), &by_sum));
        let u = Vector2::new(Complex64::new(0.2, 1.0), Complex64::new(-0.7, 0.1));
        assert!((sigma_dot_apply(&v, &u) - sigma_dot(&v) * u).norm() < 1e-15);
    }

    #[test]
    fn stack_split_round_trip() {
        let u = Vector2::new(Complex64::new(1.0, 2.0), Complex64::new(3.0, 4.0));
        let l = Vector2::new(Complex64::new(5.0, 6.0), Complex64::new(7.0, 8.0));
        let (u2, l2) = split(&stack(&u, &l));
        assert_eq!((u, l), (u2, l2));
        assert!(close(&(tau() * tau()), &Complex4Matrix::identity()));
        assert_eq!(split(&(tau() * stack(&u, &l))), (l, u));
    }
}
