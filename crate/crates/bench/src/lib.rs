//! Shared inputs for the benchmarks.

use hdmac_core::{ChannelGains, PowerBudget, SearchConfig};

/// Symmetric channel with unit direct gains and unit noise.
pub fn symmetric(inter: f64) -> ChannelGains {
    ChannelGains::symmetric(inter, 1.0, 1.0).expect("valid gains")
}

pub fn budget() -> PowerBudget {
    PowerBudget::new(2.0, 2.0).expect("valid budget")
}

/// A smaller search than the default so one iteration stays short.
pub fn light_search() -> SearchConfig {
    SearchConfig {
        slot_grid: 6,
        power_grid: 5,
        refine_iters: 20,
        ..SearchConfig::default()
    }
}
