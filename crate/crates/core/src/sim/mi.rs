//! Binned plug-in mutual information with equal-mass bins and the
//! Miller-Madow bias correction.

use std::f64::consts::LN_2;

/// Rank-based bin index: sample `k` of rank `r` goes to bin `r * bins / n`.
/// Ties are broken by sample position, so each bin holds `n / bins` samples
/// up to rounding.
pub fn equal_mass_bins(xs: &[f64], bins: usize) -> Vec<usize> {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(a.cmp(&b)));
    let mut out = vec![0usize; n];
    for (rank, &idx) in order.iter().enumerate() {
        out[idx] = rank * bins / n;
    }
    out
}

/// Plug-in entropy in nats with the `(m - 1) / (2n)` correction, `m` the
/// number of occupied cells.
fn entropy_mm(counts: &[u64], n: usize) -> f64 {
    let nf = n as f64;
    let mut h = 0.0;
    let mut occupied = 0usize;
    for &c in counts {
        if c > 0 {
            occupied += 1;
            let p = c as f64 / nf;
            h -= p * p.ln();
        }
    }
    h + (occupied.saturating_sub(1)) as f64 / (2.0 * nf)
}

/// `I(X; Y)` in bits from precomputed bin indices in `0..bins`.
pub fn mutual_information_binned(bx: &[usize], by: &[usize], bins: usize) -> f64 {
    let n = bx.len();
    let mut cx = vec![0u64; bins];
    let mut cy = vec![0u64; bins];
    let mut cxy = vec![0u64; bins * bins];
    for (&i, &j) in bx.iter().zip(by) {
        cx[i] += 1;
        cy[j] += 1;
        cxy[i * bins + j] += 1;
    }
    (entropy_mm(&cx, n) + entropy_mm(&cy, n) - entropy_mm(&cxy, n)) / LN_2
}

pub fn mutual_information(xs: &[f64], ys: &[f64], bins: usize) -> f64 {
    mutual_information_binned(&equal_mass_bins(xs, bins), &equal_mass_bins(ys, bins), bins)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_have_equal_mass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1000) as f64).collect();
        let b = equal_mass_bins(&xs, 10);
        let mut counts = [0usize; 10];
        b.iter().for_each(|&i| counts[i] += 1);
        assert!(counts.iter().all(|&c| c == 100));
        // order preserving
        let lo = xs.iter().position(|&x| x == 0.0).unwrap();
        let hi = xs.iter().position(|&x| x == 999.0).unwrap();
        assert_eq!((b[lo], b[hi]), (0, 9));
    }

    #[test]
    fn identical_variables_carry_log_bins() {
        let xs: Vec<f64> = (0..64_000).map(|i| i as f64).collect();
        let mi = mutual_information(&xs, &xs, 64);
        // log2(64) = 6, plus the Miller-Madow terms (63 + 63 - 63) / (2n ln 2)
        let mm = 63.0 / (2.0 * 64_000.0 * LN_2);
        assert!((mi - (6.0 + mm)).abs() < 1e-9, "{mi}");
    }

    #[test]
    fn independent_variables_have_near_zero_information() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..200_000).map(|_| rng.random()).collect();
        let ys: Vec<f64> = (0..200_000).map(|_| rng.random()).collect();
        let mi = mutual_information(&xs, &ys, 16);
        assert!(mi.abs() < 0.005, "{mi}");
    }
}
