use crate::error::{Error, Result};

/// Nonnegative `α_1 ..= α_k` with `Σ α_i = l` and `Σ i α_i = k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndexSolution {
    pub k: usize,
    pub l: usize,
    /// `alpha[i - 1] = α_i`.
    pub alpha: Vec<u32>,
}

pub(crate) const MAX_K: usize = 24;

fn guard(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Invariant(format!("index equations need k >= 2, got {k}")));
    }
    if k > MAX_K {
        return Err(Error::TooLarge(format!(
            "index enumeration is limited to k <= {MAX_K}, got {k}"
        )));
    }
    Ok(())
}

/// Every solution with `1 <= l <= k - 1`, sorted by `(l, α)`.
///
/// Solutions are partitions of `k` into `l` parts, `α_i` counting the parts
/// equal to `i`.
pub fn enumerate_index_solutions(k: usize) -> Result<Vec<IndexSolution>> {
    guard(k)?;
    let mut out = Vec::new();
    let mut alpha = vec![0u32; k];
    partitions(k, k, &mut alpha, &mut out);
    out.retain(|s| s.l < k);
    out.sort();
    Ok(out)
}

/// Parts of size at most `max` summing to `rest`.
fn partitions(rest: usize, max: usize, alpha: &mut [u32], out: &mut Vec<IndexSolution>) {
    if rest == 0 {
        out.push(IndexSolution {
            k: alpha.len(),
            l: alpha.iter().map(|&a| a as usize).sum(),
            alpha: alpha.to_vec(),
        });
        return;
    }
    for part in (1..=max.min(rest)).rev() {
        alpha[part - 1] += 1;
        partitions(rest - part, part, alpha, out);
        alpha[part - 1] -= 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionLemma {
    pub k: usize,
    /// Largest `l` admitting a solution with `α_1 = 0`.
    pub max_l_with_alpha1_zero: Option<usize>,
    /// `2 max_l <= k`.
    pub bound_holds: bool,
    /// `k = 2^(n+1)` with `n >= 1` and `α_2 = 2^n` (all else zero) is a solution.
    pub power_witness: bool,
}

pub fn verify_partition_lemma(k: usize) -> Result<PartitionLemma> {
    let sols = enumerate_index_solutions(k)?;
    let max_l = sols.iter().filter(|s| s.alpha[0] == 0).map(|s| s.l).max();
    let bound_holds = max_l.is_none_or(|l| 2 * l <= k);
    let power_witness = k >= 4
        && k.is_power_of_two()
        && sols.iter().any(|s| {
            s.l == k / 2
                && s.alpha
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| a as usize == if i == 1 { k / 2 } else { 0 })
        });
    Ok(PartitionLemma {
        k,
        max_l_with_alpha1_zero: max_l,
        bound_holds,
        power_witness,
    })
}
