//! Closed-form quantities and numerical oracles: total-variation distance,
//! mixing times, hitting-time bounds, and the absorbing-chain solution.

pub mod bounds;
pub mod lemma4;
pub mod mixing;
pub mod tv;

pub use bounds::{
    bound_tau_beta_finite, bound_tau_beta_inf, full_infection_ceiling, harmonic,
    harmonic_form_tau_beta_inf, lower_bound_tau_n, BirthChainBound, ContactBound,
};
pub use lemma4::{
    lemma4_hitting_times, lemma4_max_residual, lemma4_t0_asymptotic, lemma4_t0_exact,
    solve_tridiagonal,
};
pub use mixing::{
    mixing_time_asymptotic, mixing_time_numeric, worst_case_p_t, MixingMethod, MixingQuery,
    MixingTime, Regime,
};
pub use tv::{
    binomial_cdf, binomial_pmf, crossing_point, ln_binomial_pmf, tv, tv_binomial,
    tv_binomial_direct, tv_forms, FinitePmf, TvForms,
};
