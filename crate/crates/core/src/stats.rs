//! Rank tests for comparing groups of per-epoch metrics.
//!
//! Both tests use midranks for ties and the usual tie-corrected variance.
//! P-values are two-sided.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{gamma_q, normal_sf};

/// Mann–Whitney uses the exact null distribution when the smaller group has
/// fewer than this many members.
pub const EXACT_THRESHOLD: usize = 8;

/// Upper bound on `k² · N²` work for the exact Mann–Whitney distribution.
/// Larger problems fall back to the normal approximation.
const EXACT_WORK_LIMIT: f64 = 4e9;

/// Named sample of one metric, one value per epoch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSample {
    pub name: String,
    pub values: Vec<f64>,
}

impl GroupSample {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::InvalidArgument(format!("group {name:?} is empty")));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { name, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankTest {
    MannWhitneyU,
    KruskalWallis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupComparison {
    pub test: RankTest,
    /// `min(U_a, U_b)` for Mann–Whitney, `H` for Kruskal–Wallis.
    pub statistic: f64,
    pub p_value: f64,
    /// Whether the p-value comes from the exact null distribution.
    pub exact: bool,
    pub group_names: Vec<String>,
    pub n_per_group: Vec<usize>,
}

fn check_groups(groups: &[&GroupSample]) -> Result<()> {
    for g in groups {
        if g.values.is_empty() {
            return Err(Error::InvalidArgument(format!("group {:?} is empty", g.name)));
        }
        if let Some(index) = g.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
    }
    Ok(())
}

/// Doubled midranks (integers) of the pooled values, in input order, together
/// with the tie sizes.
fn doubled_midranks(values: &[f64]) -> (Vec<u64>, Vec<u64>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0u64; n];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // 1-based positions i+1 ..= j+1 share the rank (i + j + 2) / 2.
        let doubled = (i + j + 2) as u64;
        for &k in &order[i..=j] {
            ranks[k] = doubled;
        }
        ties.push((j - i + 1) as u64);
        i = j + 1;
    }
    (ranks, ties)
}

fn tie_term(ties: &[u64]) -> f64 {
    ties.iter().map(|&t| (t * t * t - t) as f64).sum()
}

/// Two-sided Mann–Whitney U test.
///
/// When `min(n_a, n_b) < 8` the p-value is `P(|U − μ| ≥ |u − μ|)` under the
/// exact permutation distribution of the observed midranks, so ties are
/// handled exactly. Otherwise a normal approximation with continuity and tie
/// correction is used.
pub fn mann_whitney_u(a: &GroupSample, b: &GroupSample) -> Result<GroupComparison> {
    check_groups(&[a, b])?;
    let (na, nb) = (a.len(), b.len());
    let pooled: Vec<f64> = a.values.iter().chain(&b.values).copied().collect();
    let (ranks, ties) = doubled_midranks(&pooled);

    let rank_sum_a: u64 = ranks[..na].iter().sum();
    // Doubled U statistic of group a and its doubled null mean.
    let u2_a = rank_sum_a as i128 - (na * (na + 1)) as i128;
    let mu2 = (na * nb) as i128;
    let u_a = u2_a as f64 / 2.0;
    let u_b = (na * nb) as f64 - u_a;
    let statistic = u_a.min(u_b);

    let n = (na + nb) as f64;
    let k = na.min(nb);
    let exact = k < EXACT_THRESHOLD && (k * k) as f64 * n * n <= EXACT_WORK_LIMIT;
    let p_value = if exact {
        exact_two_sided(&ranks, k, (u2_a - mu2).abs())
    } else {
        let var = (na * nb) as f64 / 12.0 * ((n + 1.0) - tie_term(&ties) / (n * (n - 1.0)));
        if var <= 0.0 {
            1.0
        } else {
            let z = (((u_a - (na * nb) as f64 / 2.0).abs() - 0.5) / var.sqrt()).max(0.0);
            (2.0 * normal_sf(z)).min(1.0)
        }
    };

    Ok(GroupComparison {
        test: RankTest::MannWhitneyU,
        statistic,
        p_value,
        exact,
        group_names: vec![a.name.clone(), b.name.clone()],
        n_per_group: vec![na, nb],
    })
}

/// Exact two-sided p-value: the share of all `k`-subsets of the pooled doubled
/// ranks whose doubled U deviates from its mean at least as much as observed.
fn exact_two_sided(ranks: &[u64], k: usize, observed_dev2: i128) -> f64 {
    let n = ranks.len();
    let max_sum: u64 = {
        let mut sorted = ranks.to_vec();
        sorted.sort_unstable();
        sorted[n - k..].iter().sum()
    };
    let width = max_sum as usize + 1;
    // counts[j * width + s]: subsets of size j with doubled rank sum s.
    let mut counts = vec![0.0f64; (k + 1) * width];
    counts[0] = 1.0;
    for &r in ranks {
        let r = r as usize;
        for j in (1..=k).rev() {
            let (lower, upper) = counts.split_at_mut(j * width);
            let prev = &lower[(j - 1) * width..];
            let cur = &mut upper[..width];
            for s in (r..width).rev() {
                let c = prev[s - r];
                if c != 0.0 {
                    cur[s] += c;
                }
            }
        }
    }

    // Enumerating the smaller group; |U - μ| is the same for either side.
    let n_small = k as i128;
    let n_large = (n - k) as i128;
    let mu2 = n_small * n_large;
    let offset = n_small * (n_small + 1);
    let row = &counts[k * width..];
    let mut extreme = 0.0;
    let mut total = 0.0;
    for (s, &c) in row.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        total += c;
        if (s as i128 - offset - mu2).abs() >= observed_dev2 {
            extreme += c;
        }
    }
    (extreme / total).min(1.0)
}

/// Kruskal–Wallis H test across two or more groups, with the chi-square
/// approximation on `k − 1` degrees of freedom.
pub fn kruskal_wallis(groups: &[GroupSample]) -> Result<GroupComparison> {
    if groups.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "kruskal_wallis needs at least 2 groups, got {}",
            groups.len()
        )));
    }
    check_groups(&groups.iter().collect::<Vec<_>>())?;
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.values.iter().copied()).collect();
    let (ranks, ties) = doubled_midranks(&pooled);
    let n = pooled.len() as f64;

    let mut offset = 0;
    let mut between = 0.0;
    for g in groups {
        let r: u64 = ranks[offset..offset + g.len()].iter().sum();
        let r = r as f64 / 2.0;
        between += r * r / g.len() as f64;
        offset += g.len();
    }
    let h_raw = 12.0 / (n * (n + 1.0)) * between - 3.0 * (n + 1.0);
    let correction = 1.0 - tie_term(&ties) / (n * n * n - n);
    let (statistic, p_value) = if correction <= 0.0 {
        (0.0, 1.0)
    } else {
        let h = (h_raw / correction).max(0.0);
        (h, chi_square_sf(h, (groups.len() - 1) as u32)?)
    };

    Ok(GroupComparison {
        test: RankTest::KruskalWallis,
        statistic,
        p_value,
        exact: false,
        group_names: groups.iter().map(|g| g.name.clone()).collect(),
        n_per_group: groups.iter().map(GroupSample::len).collect(),
    })
}

/// Upper-tail probability of the chi-square distribution.
pub fn chi_square_sf(x: f64, dof: u32) -> Result<f64> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::Domain(format!("chi_square_sf: x = {x}")));
    }
    if dof == 0 {
        return Err(Error::Domain("chi_square_sf: dof must be >= 1".into()));
    }
    gamma_q(dof as f64 / 2.0, x / 2.0)
}
