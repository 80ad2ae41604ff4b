//! Subcarrier and power allocation under probabilistic rate-window
//! constraints.
//!
//! The objective is the total downlink rate at mean channel gains; the
//! per-user constraint is the normal-approximation probability that the
//! user's exponential average rate stays inside its window
//! `[r_min, rho r_min]`, which must reach the confidence level `nu`.
//!
//! The search is a deterministic greedy with constraint repair. Power
//! policy: the budget splits equally across assigned subcarriers, and the
//! procedure assigns every subcarrier, so each carries `p_total / N`.
//! Greedy phase: subcarriers are taken in index order and each goes to the
//! user with the largest marginal rate on it; exact ties go to the user
//! with the fewest subcarriers so far, then to the lowest user index.
//! Repair phase: while some user misses its confidence level, the
//! subcarrier that best serves the most-violating user moves over from the
//! user with the most slack. Note the window is two-sided, so a user can
//! violate by running too fast as well as too slow; shedding subcarriers
//! through donation can therefore repair the donor too. Repair runs at
//! most N iterations, and the final plan re-evaluates every constraint
//! from scratch rather than trusting the search bookkeeping.

use crate::channel::{AllocationSet, SubcarrierChannel};
use crate::ratestats::{amc_pmf, avg_rate_stats, window_probability, AmcTable};
use crate::{Error, Result};

/// Per-user QoS demand: required rate, window factor `rho >= 1`, required
/// window probability `nu` in (0,1), and the averaging window in frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserDemand {
    pub r_min: f64,
    pub rho: f64,
    pub nu: f64,
    pub window: u32,
}

impl UserDemand {
    pub fn new(r_min: f64, rho: f64, nu: f64, window: u32) -> Result<Self> {
        if !(r_min >= 0.0) {
            return Err(Error::Domain(format!("r_min must be >= 0, got {r_min}")));
        }
        if !(rho >= 1.0) {
            return Err(Error::Domain(format!("rho must be >= 1, got {rho}")));
        }
        if !(nu > 0.0 && nu < 1.0) {
            return Err(Error::Domain(format!("nu must lie in (0,1), got {nu}")));
        }
        if window == 0 {
            return Err(Error::Domain("averaging window must be >= 1".into()));
        }
        Ok(Self { r_min, rho, nu, window })
    }
}

/// Nakagami parameters of one user-subcarrier pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NakagamiGain {
    pub m: f64,
    pub omega: f64,
}

/// The allocation instance: a K x N matrix of per-user-per-subcarrier
/// channel gains plus the shared noise PSD and subcarrier bandwidth.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPool {
    gains: Vec<Vec<NakagamiGain>>,
    n0: f64,
    b_sc: f64,
}

impl ChannelPool {
    pub fn new(gains: Vec<Vec<NakagamiGain>>, n0: f64, b_sc: f64) -> Result<Self> {
        if gains.is_empty() || gains[0].is_empty() {
            return Err(Error::Domain("channel pool must be K x N with K, N >= 1".into()));
        }
        let n = gains[0].len();
        for (k, row) in gains.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!(
                    "gain row {k} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (i, g) in row.iter().enumerate() {
                if !(g.m > 0.0) || !(g.omega > 0.0) || !g.m.is_finite() || !g.omega.is_finite() {
                    return Err(Error::Domain(format!(
                        "gain[{k}][{i}] must have positive finite m and omega"
                    )));
                }
            }
        }
        if !(n0 > 0.0) || !(b_sc > 0.0) {
            return Err(Error::Domain("n0 and b_sc must be positive".into()));
        }
        Ok(Self { gains, n0, b_sc })
    }

    pub fn n_users(&self) -> usize {
        self.gains.len()
    }

    pub fn n_subcarriers(&self) -> usize {
        self.gains[0].len()
    }

    pub fn gain(&self, user: usize, sc: usize) -> NakagamiGain {
        self.gains[user][sc]
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn b_sc(&self) -> f64 {
        self.b_sc
    }
}

/// Result of one allocation run. `assignment[n]` maps subcarrier `n` to a
/// user (or none), `powers[n]` is its transmit power, `slack[k]` is the
/// user's achieved window probability minus `nu`, and `feasible` holds
/// exactly when every slack is nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationPlan {
    pub assignment: Vec<Option<usize>>,
    pub powers: Vec<f64>,
    pub objective: f64,
    pub feasible: bool,
    pub slack: Vec<f64>,
}

/// The left-hand side of the QoS constraint for one user on one
/// allocation set, evaluated at frame `t`.
pub fn evaluate_constraint(
    user: &UserDemand,
    alloc: &AllocationSet,
    table: &AmcTable,
    t: u64,
) -> Result<f64> {
    let pmf = amc_pmf(alloc, table)?;
    let stats = avg_rate_stats(&pmf, t, user.window);
    window_probability(&stats, user.r_min, user.rho)
}

/// Mean-SNR rate of one subcarrier at power `p`, in bits/s.
fn sc_rate(gain: NakagamiGain, p: f64, n0: f64, b_sc: f64) -> f64 {
    let snr = p * gain.omega / (n0 * b_sc);
    b_sc * snr.ln_1p() / std::f64::consts::LN_2
}

/// Rate of user `k` over a subcarrier set at the fixed per-subcarrier power.
fn user_rate(pool: &ChannelPool, k: usize, set: &[usize], p_per_sc: f64) -> f64 {
    set.iter()
        .map(|&n| sc_rate(pool.gain(k, n), p_per_sc, pool.n0(), pool.b_sc()))
        .sum()
}

/// Build the concrete per-user allocation set with the policy power.
fn user_alloc(pool: &ChannelPool, k: usize, set: &[usize], p_per_sc: f64) -> Option<AllocationSet> {
    if set.is_empty() {
        return None;
    }
    let chs: Vec<SubcarrierChannel> = set
        .iter()
        .map(|&n| {
            let g = pool.gain(k, n);
            SubcarrierChannel::new(g.m, g.omega, p_per_sc, pool.n0(), pool.b_sc())
                .expect("pool invariants guarantee valid channels")
        })
        .collect();
    Some(AllocationSet::new(chs).expect("nonempty by construction"))
}

fn constraint_of(
    pool: &ChannelPool,
    k: usize,
    set: &[usize],
    user: &UserDemand,
    table: &AmcTable,
    p_per_sc: f64,
    t: Option<u64>,
) -> Result<f64> {
    let t = t.unwrap_or(10 * user.window as u64);
    match user_alloc(pool, k, set, p_per_sc) {
        Some(alloc) => evaluate_constraint(user, &alloc, table, t),
        // no subcarriers: the average rate is identically zero
        None => Ok(if user.r_min == 0.0 { 1.0 } else { 0.0 }),
    }
}

/// Greedy subcarrier allocation with constraint repair.
///
/// `t` is the frame at which the constraint is evaluated; `None` uses ten
/// averaging windows per user, by which point the transient of the
/// exponential average has decayed. Infeasibility is a result, not an
/// error: the returned plan then carries `feasible = false`.
pub fn sca_out_allocate(
    users: &[UserDemand],
    pool: &ChannelPool,
    table: &AmcTable,
    p_total: f64,
    t: Option<u64>,
) -> Result<AllocationPlan> {
    let k_users = users.len();
    if k_users == 0 {
        return Err(Error::Domain("at least one user required".into()));
    }
    if pool.n_users() != k_users {
        return Err(Error::Domain(format!(
            "pool has {} gain rows for {} users",
            pool.n_users(),
            k_users
        )));
    }
    let n_sc = pool.n_subcarriers();
    if n_sc < k_users {
        return Err(Error::Domain(format!(
            "need at least as many subcarriers as users ({n_sc} < {k_users})"
        )));
    }
    if !(p_total > 0.0) || !p_total.is_finite() {
        return Err(Error::Domain(format!(
            "total power budget must be positive, got {p_total}"
        )));
    }
    // every subcarrier ends up assigned, so each carries p_total / N
    let p_per_sc = p_total / n_sc as f64;
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); k_users];

    // greedy phase: every subcarrier to the user with the best marginal
    // rate on it; exact ties break toward fewer subcarriers, then lower
    // user index
    for n in 0..n_sc {
        let mut best_k = 0usize;
        let mut best_gain = f64::NEG_INFINITY;
        for k in 0..k_users {
            let marginal = sc_rate(pool.gain(k, n), p_per_sc, pool.n0(), pool.b_sc());
            let better = marginal > best_gain
                || (marginal == best_gain && sets[k].len() < sets[best_k].len());
            if better {
                best_gain = marginal;
                best_k = k;
            }
        }
        sets[best_k].push(n);
    }

    // repair phase: up to N moves from the most-slack user toward the
    // most-violating one
    for _ in 0..n_sc {
        let mut constraints = Vec::with_capacity(k_users);
        for k in 0..k_users {
            constraints.push(constraint_of(pool, k, &sets[k], &users[k], table, p_per_sc, t)?);
        }
        let mut receiver = None;
        let mut worst = f64::INFINITY;
        for k in 0..k_users {
            let slack = constraints[k] - users[k].nu;
            if slack < 0.0 && constraints[k] < worst {
                worst = constraints[k];
                receiver = Some(k);
            }
        }
        let Some(recv) = receiver else { break };
        let mut donor = None;
        let mut best_slack = f64::NEG_INFINITY;
        for k in 0..k_users {
            if k == recv || sets[k].len() < 2 {
                continue;
            }
            let slack = constraints[k] - users[k].nu;
            if slack > best_slack {
                best_slack = slack;
                donor = Some(k);
            }
        }
        let Some(don) = donor else { break };
        // the donor subcarrier that most improves the receiver's rate
        let mut best_sc = sets[don][0];
        let mut best_marginal = f64::NEG_INFINITY;
        for &n in &sets[don] {
            let marginal = sc_rate(pool.gain(recv, n), p_per_sc, pool.n0(), pool.b_sc());
            if marginal > best_marginal {
                best_marginal = marginal;
                best_sc = n;
            }
        }
        sets[don].retain(|&n| n != best_sc);
        sets[recv].push(best_sc);
        sets[recv].sort_unstable();
    }

    // final bookkeeping: powers, objective, post-hoc constraint check
    let mut assignment = vec![None; n_sc];
    let mut powers = vec![0.0; n_sc];
    for (k, set) in sets.iter().enumerate() {
        for &n in set {
            assignment[n] = Some(k);
            powers[n] = p_per_sc;
        }
    }
    let mut slack = Vec::with_capacity(k_users);
    for k in 0..k_users {
        let c = constraint_of(pool, k, &sets[k], &users[k], table, p_per_sc, t)?;
        slack.push(c - users[k].nu);
    }
    let feasible = slack.iter().all(|&s| s >= 0.0);
    let objective = sets
        .iter()
        .enumerate()
        .map(|(k, set)| user_rate(pool, k, set, p_per_sc))
        .sum();
    Ok(AllocationPlan {
        assignment,
        powers,
        objective,
        feasible,
        slack,
    })
}

/// Recompute the plan objective from its assignment and powers.
pub fn plan_objective(plan: &AllocationPlan, pool: &ChannelPool) -> f64 {
    plan.assignment
        .iter()
        .enumerate()
        .filter_map(|(n, user)| {
            user.map(|k| sc_rate(pool.gain(k, n), plan.powers[n], pool.n0(), pool.b_sc()))
        })
        .sum()
}
