//! Harmonic numbers, the ring prefix-product kernel and its Gaussian envelopes.

use super::{AgeBounds, BoundTarget};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic_number(n: u64) -> f64 {
    (1..=n)
        .rev()
        .map(|k| 1.0 / k as f64)
        .collect::<CompensatedSum>()
        .value()
}

/// `Π_{k=1}^{j} 1/(1 + k/n)` for `j = 0..=m`, evaluated in log space.
///
/// # Panics
/// If `n == 0` or `m > n`.
pub fn prefix_products(n: usize, m: usize) -> Vec<f64> {
    assert!(n >= 1 && m <= n, "prefix_products needs 1 ≤ n and m ≤ n (n={n}, m={m})");
    let nf = n as f64;
    let mut log = CompensatedSum::default();
    let mut out = Vec::with_capacity(m + 1);
    out.push(1.0);
    for k in 1..=m {
        log.add((k as f64 / nf).ln_1p());
        out.push((-log.value()).exp());
    }
    out
}

/// Prefix products together with their running sums `S_j = Π_1 + ... + Π_j` (`S_0 = 0`).
#[derive(Debug, Clone)]
pub(crate) struct RingKernel {
    pub products: Vec<f64>,
    pub sums: Vec<f64>,
}

impl RingKernel {
    pub(crate) fn new(n: usize, m: usize) -> Self {
        let products = prefix_products(n, m);
        let mut acc = CompensatedSum::default();
        let sums = products
            .iter()
            .enumerate()
            .map(|(j, &p)| {
                if j > 0 {
                    acc.add(p);
                }
                acc.value()
            })
            .collect();
        RingKernel { products, sums }
    }
}

/// `Σ_{j=1}^{n0} Π_{k=1}^{j} 1/(1 + k/n)`, the quantity that is `Θ(√n)` once `n0` outgrows `√n`.
///
/// # Panics
/// Unless `1 ≤ n0 ≤ n`.
pub fn lemma_sum(n: usize, n0: usize) -> f64 {
    assert!(n0 >= 1, "lemma_sum needs n0 ≥ 1");
    RingKernel::new(n, n0).sums[n0]
}

/// Gaussian envelopes `(Σ e^{-j²/n}, Σ e^{-j²/4n})` over `j = 1..=n0` that sandwich [`lemma_sum`].
pub fn lemma_envelopes(n: usize, n0: usize) -> AgeBounds {
    assert!(n >= 1 && (1..=n).contains(&n0), "lemma_envelopes needs 1 ≤ n0 ≤ n");
    let nf = n as f64;
    let (mut lo, mut hi) = (CompensatedSum::default(), CompensatedSum::default());
    for j in 1..=n0 {
        let j2 = (j as f64).powi(2);
        lo.add((-j2 / nf).exp());
        hi.add((-j2 / (4.0 * nf)).exp());
    }
    AgeBounds {
        target: BoundTarget::PrefixSum,
        lower: lo.value(),
        upper: hi.value(),
        label: "gaussian-envelope",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn harmonic_small() {
        assert_eq!(harmonic_number(1), 1.0);
        // 1 + 1/2 + 1/3 + 1/4 = 25/12
        assert!((harmonic_number(4) - 25.0 / 12.0).abs() < 1e-15);
        assert_eq!(harmonic_number(0), 0.0);
    }

    #[test]
    fn harmonic_matches_log_asymptote() {
        let n = 1_000_000u64;
        assert!((harmonic_number(n) - ((n as f64).ln() + EULER_GAMMA)).abs() < 1e-6);
    }

    #[test]
    fn prefix_products_edges() {
        assert_eq!(prefix_products(5, 0), vec![1.0]);
        assert!((prefix_products(1, 1)[1] - 0.5).abs() < 1e-15);
        // direct multiplication for a small case
        let direct: f64 = (1..=3).map(|k| 1.0 / (1.0 + k as f64 / 7.0)).product();
        assert!((prefix_products(7, 3)[3] - direct).abs() < 1e-14);
    }

    #[test]
    fn prefix_products_gaussian_sandwich_large() {
        let n = 10_000;
        let pp = prefix_products(n, n);
        let j = n as f64;
        let last = pp[n];
        assert!(last >= (-j * j / n as f64).exp() && last <= (-j * j / (4.0 * n as f64)).exp());
    }

    #[test]
    fn lemma_trivial_cases() {
        assert!((lemma_sum(1, 1) - 0.5).abs() < 1e-15);
        let env = lemma_envelopes(9, 1);
        assert!((env.lower - (-1.0f64 / 9.0).exp()).abs() < 1e-15);
        assert!((env.upper - (-1.0f64 / 36.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }
}
