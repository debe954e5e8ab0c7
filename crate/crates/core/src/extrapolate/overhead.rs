use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// Number of distinct noise settings a truncated multinomial fit needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverheadCount {
    pub sources: usize,
    pub order: usize,
    /// `Σ_{i=0}^{n} C(i+N−1, N−1)`, the full basis size.
    pub cumulative: BigUint,
    /// `C(n+N−1, N−1)`, the monomials of exactly degree `n`.
    pub top_order_term: BigUint,
    /// Monomials of each degree `0..=n`.
    pub per_order: Vec<BigUint>,
}

impl OverheadCount {
    pub fn cumulative_u64(&self) -> Option<u64> {
        self.cumulative.to_u64()
    }

    /// Settings needed by standard Richardson extrapolation of the same order.
    pub fn standard_zne(&self) -> usize {
        self.order + 1
    }
}

/// Exact `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // exact at every step: acc = C(n−k+i+1, i+1)
        acc *= n - k + i + 1;
        acc /= i + 1;
    }
    acc
}

pub fn overhead_count(sources: usize, order: usize) -> OverheadCount {
    assert!(sources >= 1, "at least one noise source is required");
    let n_minus_1 = (sources - 1) as u64;
    let per_order: Vec<BigUint> = (0..=order as u64)
        .map(|i| binomial(i + n_minus_1, n_minus_1))
        .collect();
    let cumulative = per_order.iter().sum();
    OverheadCount {
        sources,
        order,
        top_order_term: per_order[order].clone(),
        cumulative,
        per_order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_table() {
        // Pascal's rule, built independently
        let mut row = vec![1u128];
        for n in 1..=40u64 {
            let mut next = vec![1u128; n as usize + 1];
            for k in 1..n as usize {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
            for (k, v) in row.iter().enumerate() {
                assert_eq!(binomial(n, k as u64), BigUint::from(*v));
            }
        }
        assert_eq!(binomial(3, 5), BigUint::from(0u32));
    }

    #[test]
    fn two_hundred_sources_third_order() {
        let c = overhead_count(200, 3);
        assert_eq!(c.top_order_term, BigUint::from(1_353_400u64));
        assert_eq!(c.cumulative, BigUint::from(1_373_701u64));
        assert_eq!(
            c.per_order,
            [1u64, 200, 20_100, 1_353_400].map(BigUint::from).to_vec()
        );
        assert_eq!(c.standard_zne(), 4);
        assert_eq!(overhead_count(1, 3).cumulative, BigUint::from(4u32));
    }

    #[test]
    fn hockey_stick_identity() {
        // Σ_{i≤n} C(i+N−1, N−1) = C(n+N, N)
        for n_src in 1..30u64 {
            for order in 0..8u64 {
                let c = overhead_count(n_src as usize, order as usize);
                assert_eq!(c.cumulative, binomial(order + n_src, n_src));
            }
        }
    }
}
