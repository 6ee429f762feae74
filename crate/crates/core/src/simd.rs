//! Inner loops of the point-based backup. `f64` gets a matrix-multiply
//! library for dot products and an AVX2 path for the argmax scans; other
//! scalars take the plain loops. The AVX2 code uses only IEEE add, multiply
//! and max, so it agrees bit for bit with the plain loops.

use std::any::TypeId;

use crate::scalar::Real;

/// Slots handled per call of [`max_affine`].
pub(crate) const LANES: usize = 4;

fn cast<T: 'static, U: 'static>(x: &[T]) -> Option<&[U]> {
    // SAFETY: T and U are the same type.
    (TypeId::of::<T>() == TypeId::of::<U>()).then(|| unsafe { std::slice::from_raw_parts(x.as_ptr().cast(), x.len()) })
}

fn cast_mut<T: 'static, U: 'static>(x: &mut [T]) -> Option<&mut [U]> {
    // SAFETY: T and U are the same type.
    (TypeId::of::<T>() == TypeId::of::<U>())
        .then(|| unsafe { std::slice::from_raw_parts_mut(x.as_mut_ptr().cast(), x.len()) })
}

/// `out[i·n + j] = Σ_s a[i·k + s] · b[s·n + j]` for an `m×k` by `k×n` product.
pub(crate) fn matmul<T: Real>(m: usize, k: usize, n: usize, a: &[T], b: &[T], out: &mut [T]) {
    assert!(a.len() >= m * k && b.len() >= k * n && out.len() >= m * n);
    if m == 0 || n == 0 {
        return;
    }
    let (k_i, n_i) = (k as isize, n as isize);
    if let (Some(a), Some(b)) = (cast::<T, f64>(a), cast::<T, f64>(b)) {
        let out = cast_mut::<T, f64>(out).expect("same scalar");
        // SAFETY: bounds checked above; row-major strides.
        unsafe {
            matrixmultiply::dgemm(m, k, n, 1.0, a.as_ptr(), k_i, 1, b.as_ptr(), n_i, 1, 0.0, out.as_mut_ptr(), n_i, 1);
        }
        return;
    }
    if let (Some(a), Some(b)) = (cast::<T, f32>(a), cast::<T, f32>(b)) {
        let out = cast_mut::<T, f32>(out).expect("same scalar");
        // SAFETY: as above.
        unsafe {
            matrixmultiply::sgemm(m, k, n, 1.0, a.as_ptr(), k_i, 1, b.as_ptr(), n_i, 1, 0.0, out.as_mut_ptr(), n_i, 1);
        }
        return;
    }
    for i in 0..m {
        let row = &mut out[i * n..(i + 1) * n];
        row.iter_mut().for_each(|x| *x = T::zero());
        for s in 0..k {
            let x = a[i * k + s];
            if x == T::zero() {
                continue;
            }
            for (o, &y) in row.iter_mut().zip(&b[s * n..(s + 1) * n]) {
                *o = *o + x * y;
            }
        }
    }
}

/// `out[i] = max_j base·d[i][j] + w[i]·alpha[j]`, or `-∞` for empty input.
pub(crate) fn max_affine<T: Real>(base: T, w: [T; LANES], d: [&[T]; LANES], alpha: &[T]) -> [T; LANES] {
    let n = alpha.len();
    let d = d.map(|x| &x[..n]);
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("avx2") {
        if let Some(alpha) = cast::<T, f64>(alpha) {
            let d = d.map(|x| cast::<T, f64>(x).expect("same scalar"));
            // SAFETY: AVX2 is available.
            let out = unsafe { avx2::max_affine(base.as_f64(), w.map(|x| x.as_f64()), d, alpha) };
            return out.map(T::lit);
        }
    }
    let mut out = [T::neg_infinity(); LANES];
    for (i, o) in out.iter_mut().enumerate() {
        for (&x, &a) in d[i].iter().zip(alpha) {
            let v = base * x + w[i] * a;
            if v > *o {
                *o = v;
            }
        }
    }
    out
}

/// Lowest `j` with `base·d[j] + w·alpha[j] == target`.
pub(crate) fn find_affine<T: Real>(base: T, w: T, d: &[T], alpha: &[T], target: T) -> Option<usize> {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("avx2") {
        if let (Some(d), Some(alpha)) = (cast::<T, f64>(d), cast::<T, f64>(alpha)) {
            // SAFETY: AVX2 is available.
            return unsafe { avx2::find_affine(base.as_f64(), w.as_f64(), d, alpha, target.as_f64()) };
        }
    }
    d.iter().zip(alpha).position(|(&x, &a)| base * x + w * a == target)
}

#[cfg(target_arch = "x86_64")]
mod avx2 {
    use super::LANES;
    use std::arch::x86_64::*;

    #[target_feature(enable = "avx2")]
    pub(super) fn max_affine(base: f64, w: [f64; LANES], d: [&[f64]; LANES], alpha: &[f64]) -> [f64; LANES] {
        let n = alpha.len();
        let d = d.map(|x| &x[..n]);
        let vb = _mm256_set1_pd(base);
        let vw = w.map(|x| _mm256_set1_pd(x));
        let mut acc = [[_mm256_set1_pd(f64::NEG_INFINITY); 2]; LANES];
        let chunks = n / 8;
        for j in 0..chunks {
            for u in 0..2 {
                let off = j * 8 + u * 4;
                // SAFETY: off + 4 ≤ n for every slice read here.
                unsafe {
                    let a = _mm256_loadu_pd(alpha.as_ptr().add(off));
                    for i in 0..LANES {
                        let x = _mm256_loadu_pd(d[i].as_ptr().add(off));
                        let v = _mm256_add_pd(_mm256_mul_pd(vb, x), _mm256_mul_pd(vw[i], a));
                        acc[i][u] = _mm256_max_pd(v, acc[i][u]);
                    }
                }
            }
        }
        let mut out = [f64::NEG_INFINITY; LANES];
        for i in 0..LANES {
            let mut lanes = [0.0; 4];
            // SAFETY: writes four doubles into a four-element array.
            unsafe { _mm256_storeu_pd(lanes.as_mut_ptr(), _mm256_max_pd(acc[i][0], acc[i][1])) };
            for v in lanes.into_iter().chain((chunks * 8..n).map(|j| base * d[i][j] + w[i] * alpha[j])) {
                if v > out[i] {
                    out[i] = v;
                }
            }
        }
        out
    }

    #[target_feature(enable = "avx2")]
    pub(super) fn find_affine(base: f64, w: f64, d: &[f64], alpha: &[f64], target: f64) -> Option<usize> {
        let n = d.len().min(alpha.len());
        let (vb, vw, vt) = (_mm256_set1_pd(base), _mm256_set1_pd(w), _mm256_set1_pd(target));
        let chunks = n / 4;
        for j in 0..chunks {
            // SAFETY: 4·j + 4 ≤ n.
            let hits = unsafe {
                let x = _mm256_loadu_pd(d.as_ptr().add(j * 4));
                let a = _mm256_loadu_pd(alpha.as_ptr().add(j * 4));
                let v = _mm256_add_pd(_mm256_mul_pd(vb, x), _mm256_mul_pd(vw, a));
                _mm256_movemask_pd(_mm256_cmp_pd::<_CMP_EQ_OQ>(v, vt))
            };
            if hits != 0 {
                return Some(j * 4 + hits.trailing_zeros() as usize);
            }
        }
        (chunks * 4..n).find(|&j| base * d[j] + w * alpha[j] == target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalar_max(base: f64, w: f64, d: &[f64], alpha: &[f64]) -> f64 {
        d.iter().zip(alpha).map(|(&x, &a)| base * x + w * a).fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn max_affine_matches_plain_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [0, 1, 3, 7, 8, 9, 31, 100] {
            let d: Vec<Vec<f64>> = (0..LANES).map(|_| (0..n).map(|_| rng.random_range(-5.0..5.0)).collect()).collect();
            let alpha: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let w: [f64; LANES] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let base = rng.random_range(0.0..1.0);
            let got = max_affine(base, w, std::array::from_fn(|i| d[i].as_slice()), &alpha);
            let narrow = |v: &[f64]| v.iter().map(|&x| x as f32).collect::<Vec<f32>>();
            let d32: Vec<Vec<f32>> = d.iter().map(|v| narrow(v)).collect();
            let got32 = max_affine(base as f32, w.map(|x| x as f32), std::array::from_fn(|i| d32[i].as_slice()), &narrow(&alpha));
            for i in 0..LANES {
                let want = scalar_max(base, w[i], &d[i], &alpha);
                assert_eq!(got[i].to_bits(), want.to_bits(), "n={n}");
                if n > 0 {
                    assert!((got32[i] as f64 - want).abs() < 1e-4);
                    let j = find_affine(base, w[i], &d[i], &alpha, got[i]).unwrap();
                    assert_eq!(base * d[i][j] + w[i] * alpha[j], want);
                }
            }
        }
    }

    #[test]
    fn matmul_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (m, k, n) = (5, 7, 9);
        let a: Vec<f64> = (0..m * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..k * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut out = vec![0.0; m * n];
        matmul(m, k, n, &a, &b, &mut out);
        for i in 0..m {
            for j in 0..n {
                let want: f64 = (0..k).map(|s| a[i * k + s] * b[s * n + j]).sum();
                assert!((out[i * n + j] - want).abs() < 1e-12);
            }
        }
    }
}
