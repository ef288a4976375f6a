use std::collections::BTreeSet;

/// `base^exp mod modulus`.
pub fn modpow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Denominators of the continued-fraction convergents of `numer / denom`
/// that do not exceed `bound`, in expansion order.
pub fn continued_fraction_denominators(numer: u64, denom: u64, bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if denom == 0 {
        return out;
    }
    // q_{k} = a_k q_{k-1} + q_{k-2}
    let (mut q_prev2, mut q_prev1) = (1u128, 0u128);
    let (mut num, mut den) = (numer as u128, denom as u128);
    while den != 0 {
        let a = num / den;
        let q = a * q_prev1 + q_prev2;
        if q > bound as u128 {
            break;
        }
        out.push(q as u64);
        (q_prev2, q_prev1) = (q_prev1, q);
        (num, den) = (den, num - a * den);
    }
    out
}

/// Result of classical post-processing on a batch of counting-register
/// samples. `order` is set only when `a^order = 1 (mod n)` was verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderEstimate {
    pub order: Option<u64>,
    pub candidates: BTreeSet<u64>,
    pub raw_samples: Vec<u64>,
}

impl OrderEstimate {
    pub fn is_valid(&self) -> bool {
        self.order.is_some()
    }
}

/// Aggregates every sample's convergent denominators (bounded by `n`), adds
/// the lcm of each candidate pair, and returns the smallest candidate `d`
/// with `a^d = 1 (mod n)`.
pub fn estimate_order(samples: &[u64], q: u64, n: u64, a: u64) -> OrderEstimate {
    let mut candidates = BTreeSet::new();
    for &m in samples {
        candidates.extend(
            continued_fraction_denominators(m, q, n)
                .into_iter()
                .filter(|&d| d >= 1),
        );
    }
    let singles: Vec<u64> = candidates.iter().copied().collect();
    for (i, &x) in singles.iter().enumerate() {
        for &y in &singles[i + 1..] {
            let l = lcm(x, y);
            if l <= n {
                candidates.insert(l);
            }
        }
    }
    let order = candidates.iter().copied().find(|&d| modpow(a, d, n) == 1);
    OrderEstimate {
        order,
        candidates,
        raw_samples: samples.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergents_of_three_quarters() {
        assert_eq!(continued_fraction_denominators(192, 256, 15), vec![1, 1, 4]);
        assert_eq!(continued_fraction_denominators(0, 256, 15), vec![1]);
    }

    #[test]
    fn single_sample_recovers_four() {
        let est = estimate_order(&[192], 256, 15, 7);
        assert_eq!(est.order, Some(4));
        assert_eq!(modpow(7, 4, 15), 1);
    }

    #[test]
    fn zero_sample_is_invalid() {
        let est = estimate_order(&[0], 256, 15, 7);
        assert!(!est.is_valid());
        assert!(!estimate_order(&[0, 0, 0], 1024, 21, 2).is_valid());
    }

    #[test]
    fn paired_samples() {
        let est = estimate_order(&[64, 192], 256, 15, 7);
        assert_eq!(est.order, Some(4));
        assert!(est.candidates.contains(&4));
    }

    #[test]
    fn lcm_of_candidates_is_tried() {
        // phases 1/2 and 1/3 alone give 2 and 3; only lcm 6 is the order
        let n = 7;
        let a = 3; // order 6 mod 7
        let q = 1 << 12;
        let half = q / 2;
        let third = (q as f64 / 3.0).round() as u64;
        assert_eq!(estimate_order(&[half], q, n, a).order, None);
        assert_eq!(estimate_order(&[third], q, n, a).order, None);
        assert_eq!(estimate_order(&[half, third], q, n, a).order, Some(6));
    }

    #[test]
    fn modpow_small() {
        assert_eq!(modpow(7, 2, 15), 4);
        assert_eq!(modpow(2, 10, 1000), 24);
        assert_eq!(modpow(5, 0, 7), 1);
    }
}
