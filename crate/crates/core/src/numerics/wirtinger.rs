use num_complex::Complex64;

/// Central-difference Wirtinger derivatives `(f_z, f_zbar)` of `map` at `z` with step `h`.
///
/// Second order accurate. Only used to cross-check closed-form jets.
pub fn wirtinger_fd<F>(map: F, z: Complex64, h: f64) -> (Complex64, Complex64)
where
    F: Fn(Complex64) -> Complex64,
{
    let dx = (map(z + Complex64::new(h, 0.0)) - map(z - Complex64::new(h, 0.0))) / (2.0 * h);
    let dy = (map(z + Complex64::new(0.0, h)) - map(z - Complex64::new(0.0, h))) / (2.0 * h);
    let i = Complex64::i();
    (0.5 * (dx - i * dy), 0.5 * (dx + i * dy))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_conjugate() {
        let z = Complex64::new(0.2, -0.7);
        let (a, b) = wirtinger_fd(|w| w, z, 1e-4);
        assert!((a - 1.0).norm() < 1e-10 && b.norm() < 1e-10);
        let (a, b) = wirtinger_fd(|w| w.conj(), z, 1e-4);
        assert!(a.norm() < 1e-10 && (b - 1.0).norm() < 1e-10);
    }

    #[test]
    fn square() {
        let z = Complex64::new(1.0, 1.0);
        let (a, b) = wirtinger_fd(|w| w * w, z, 1e-4);
        assert!((a - Complex64::new(2.0, 2.0)).norm() < 1e-7);
        assert!(b.norm() < 1e-7);
    }
}
