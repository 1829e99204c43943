use clap::ValueEnum;
use serde::Serialize;

/// One-parameter families of `(N-m)::m` states indexed by `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `m = 0`.
    Noon,
    /// `N - 2m = 1`.
    #[value(name = "delta-1")]
    #[serde(rename = "delta-1")]
    Delta1,
    /// `N - 2m = 2`.
    #[value(name = "delta-2")]
    #[serde(rename = "delta-2")]
    Delta2,
    /// `N - 2m = 3`.
    #[value(name = "delta-3")]
    #[serde(rename = "delta-3")]
    Delta3,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Noon => "noon",
            Family::Delta1 => "delta-1",
            Family::Delta2 => "delta-2",
            Family::Delta3 => "delta-3",
        }
    }

    /// Members `(N, m)` with `N <= n_max`, ascending in `N`.
    pub fn members(self, n_max: u32) -> Vec<(u32, u32)> {
        let diff = match self {
            Family::Noon => return (1..=n_max).map(|n| (n, 0)).collect(),
            Family::Delta1 => 1,
            Family::Delta2 => 2,
            Family::Delta3 => 3,
        };
        (diff..=n_max).step_by(2).map(|n| (n, (n - diff) / 2)).collect()
    }
}
