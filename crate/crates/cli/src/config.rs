//! Declarative run configuration: one TOML file describes the link, the
//! channels or route, the demands, and what to compute.
//!
//! Apart from the simulation seed (0) and frame count (100000), nothing
//! defaults silently: physically meaningful parameters must be written
//! down, and a missing section is a config error, not a guess.

use serde::{Deserialize, Serialize};

use nakarate_core::allocator::{ChannelPool, NakagamiGain, UserDemand};
use nakarate_core::channel::{AllocationSet, LinkConfig, SubcarrierChannel};
use nakarate_core::mcsim::SimConfig;
use nakarate_core::outage::HopPath;
use nakarate_core::ratestats::AmcTable;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    SingleHop,
    MultiHop,
    Sweep,
    Simulate,
    Allocate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub b_total: f64,
    pub n_subcarriers: u32,
    pub n0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub m: f64,
    pub omega: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopSection {
    pub channels: Vec<ChannelSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    RMin,
    BTotal,
    P,
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: u32,
    pub scale: SweepScale,
    #[serde(default)]
    pub simulate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_n_frames")]
    pub n_frames: u64,
    #[serde(default = "default_frame_duration")]
    pub frame_duration: f64,
}

fn default_n_frames() -> u64 {
    100_000
}

fn default_frame_duration() -> f64 {
    0.01
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            seed: 0,
            n_frames: default_n_frames(),
            frame_duration: default_frame_duration(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrUnit {
    Db,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmcSection {
    pub thresholds: Vec<f64>,
    pub bits: Vec<f64>,
    pub unit: SnrUnit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserSection {
    pub r_min: f64,
    pub rho: f64,
    pub nu: f64,
    pub window: u32,
    pub gains: Vec<GainSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainSection {
    pub m: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocateSection {
    pub p_total: f64,
    #[serde(default)]
    pub t: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub link: LinkSection,
    #[serde(default)]
    pub r_min: Option<f64>,
    #[serde(default)]
    pub channels: Option<Vec<ChannelSection>>,
    #[serde(default)]
    pub hops: Option<Vec<HopSection>>,
    #[serde(default)]
    pub per_hop: Option<Vec<f64>>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub sim: Option<SimSection>,
    #[serde(default)]
    pub amc: Option<AmcSection>,
    #[serde(default)]
    pub users: Option<Vec<UserSection>>,
    #[serde(default)]
    pub allocate: Option<AllocateSection>,
    #[serde(default)]
    pub output: Option<String>,
}

impl RunConfig {
    /// Parse and structurally validate a config file's contents.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: &str| Err(CliError::Config(msg.to_string()));
        match self.scenario {
            Scenario::SingleHop => {
                if self.r_min.is_none() {
                    return fail("single_hop requires a top-level r_min");
                }
                if self.channels.as_ref().is_none_or(|c| c.is_empty()) {
                    return fail("single_hop requires a nonempty [[channels]] list");
                }
            }
            Scenario::MultiHop => {
                if self.r_min.is_none() && self.per_hop.is_none() {
                    return fail("multi_hop requires r_min (with [[hops]]) or per_hop");
                }
                let has_hops = self.hops.as_ref().is_some_and(|h| !h.is_empty());
                let has_per_hop = self.per_hop.as_ref().is_some_and(|p| !p.is_empty());
                if has_hops == has_per_hop {
                    return fail("multi_hop takes exactly one of [[hops]] or per_hop");
                }
                if let Some(ps) = &self.per_hop {
                    if ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
                        return fail("per_hop probabilities must lie in [0, 1]");
                    }
                }
            }
            Scenario::Sweep => {
                if self.r_min.is_none() {
                    return fail("sweep requires a top-level r_min");
                }
                let Some(sweep) = &self.sweep else {
                    return fail("sweep scenario requires a [sweep] section");
                };
                if sweep.points < 2 {
                    return fail("sweep needs at least 2 points");
                }
                if !(sweep.start.is_finite() && sweep.stop.is_finite() && sweep.start < sweep.stop)
                {
                    return fail("sweep needs finite start < stop");
                }
                if sweep.scale == SweepScale::Log && sweep.start <= 0.0 {
                    return fail("log-scale sweep needs start > 0");
                }
                if !self.has_link_channels() {
                    return fail("sweep requires [[channels]] or [[hops]]");
                }
            }
            Scenario::Simulate => {
                if self.r_min.is_none() {
                    return fail("simulate requires a top-level r_min");
                }
                if !self.has_link_channels() {
                    return fail("simulate requires [[channels]] or [[hops]]");
                }
            }
            Scenario::Allocate => {
                let Some(users) = &self.users else {
                    return fail("allocate requires a [[users]] list");
                };
                if users.is_empty() {
                    return fail("allocate requires at least one user");
                }
                let n = users[0].gains.len();
                if n == 0 {
                    return fail("each user needs one gain entry per subcarrier");
                }
                if users.iter().any(|u| u.gains.len() != n) {
                    return fail("all users must list the same number of gains");
                }
                if self.allocate.is_none() {
                    return fail("allocate requires an [allocate] section with p_total");
                }
            }
        }
        Ok(())
    }

    fn has_link_channels(&self) -> bool {
        self.channels.as_ref().is_some_and(|c| !c.is_empty())
            || self.hops.as_ref().is_some_and(|h| {
                !h.is_empty() && h.iter().all(|hop| !hop.channels.is_empty())
            })
    }

    pub fn link(&self) -> Result<LinkConfig, CliError> {
        LinkConfig::new(self.link.b_total, self.link.n_subcarriers, self.link.n0)
            .map_err(|e| CliError::Config(format!("[link] {e}")))
    }

    /// The effective simulation settings, seed optionally overridden from
    /// the command line.
    pub fn sim_config(&self, seed_override: Option<u64>) -> Result<SimConfig, CliError> {
        let section = self.sim.clone().unwrap_or_default();
        let cfg = SimConfig {
            seed: seed_override.unwrap_or(section.seed),
            n_frames: section.n_frames,
            frame_duration: section.frame_duration,
        };
        if cfg.n_frames == 0 {
            return Err(CliError::Config("[sim] n_frames must be >= 1".into()));
        }
        if !(cfg.frame_duration > 0.0) {
            return Err(CliError::Config(
                "[sim] frame_duration must be positive".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn amc_table(&self) -> Result<AmcTable, CliError> {
        match &self.amc {
            None => Ok(AmcTable::default()),
            Some(a) => {
                let result = match a.unit {
                    SnrUnit::Db => AmcTable::from_db(a.thresholds.clone(), a.bits.clone()),
                    SnrUnit::Linear => {
                        AmcTable::from_linear(a.thresholds.clone(), a.bits.clone())
                    }
                };
                result.map_err(|e| CliError::Config(format!("[amc] {e}")))
            }
        }
    }

    fn build_alloc(
        link: &LinkConfig,
        channels: &[ChannelSection],
    ) -> Result<AllocationSet, CliError> {
        let chs: Result<Vec<SubcarrierChannel>, CliError> = channels
            .iter()
            .map(|c| {
                SubcarrierChannel::new(c.m, c.omega, c.p, link.n0(), link.b_sc())
                    .map_err(|e| CliError::Config(format!("[[channels]] {e}")))
            })
            .collect();
        AllocationSet::new(chs?).map_err(|e| CliError::Config(e.to_string()))
    }

    /// The single-hop allocation, when channels are given.
    pub fn allocation(&self) -> Result<Option<AllocationSet>, CliError> {
        match &self.channels {
            Some(chs) if !chs.is_empty() => {
                Ok(Some(Self::build_alloc(&self.link()?, chs)?))
            }
            _ => Ok(None),
        }
    }

    /// The multi-hop path, when hops are given.
    pub fn path(&self) -> Result<Option<HopPath>, CliError> {
        match &self.hops {
            Some(hops) if !hops.is_empty() => {
                let link = self.link()?;
                let allocs: Result<Vec<AllocationSet>, CliError> = hops
                    .iter()
                    .map(|h| Self::build_alloc(&link, &h.channels))
                    .collect();
                Ok(Some(
                    HopPath::new(allocs?).map_err(|e| CliError::Config(e.to_string()))?,
                ))
            }
            _ => Ok(None),
        }
    }

    /// Users and channel pool for the allocator scenario.
    pub fn allocator_instance(
        &self,
    ) -> Result<(Vec<UserDemand>, ChannelPool, AllocateSection), CliError> {
        let users_cfg = self.users.as_ref().expect("validated");
        let alloc_cfg = self.allocate.clone().expect("validated");
        let link = self.link()?;
        let users: Result<Vec<UserDemand>, CliError> = users_cfg
            .iter()
            .map(|u| {
                UserDemand::new(u.r_min, u.rho, u.nu, u.window)
                    .map_err(|e| CliError::Config(format!("[[users]] {e}")))
            })
            .collect();
        let gains: Vec<Vec<NakagamiGain>> = users_cfg
            .iter()
            .map(|u| {
                u.gains
                    .iter()
                    .map(|g| NakagamiGain { m: g.m, omega: g.omega })
                    .collect()
            })
            .collect();
        let pool = ChannelPool::new(gains, link.n0(), link.b_sc())
            .map_err(|e| CliError::Config(format!("[[users.gains]] {e}")))?;
        Ok((users?, pool, alloc_cfg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SINGLE_HOP: &str = r#"
scenario = "single_hop"
r_min = 1.0

[link]
b_total = 1.0
n_subcarriers = 1
n0 = 1.0

[[channels]]
m = 1.0
omega = 1.0
p = 10.0
"#;

    #[test]
    fn parses_single_hop() {
        let cfg = RunConfig::from_toml(SINGLE_HOP).unwrap();
        assert_eq!(cfg.scenario, Scenario::SingleHop);
        let alloc = cfg.allocation().unwrap().unwrap();
        assert_eq!(alloc.len(), 1);
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = RunConfig::from_toml(SINGLE_HOP).unwrap();
        let text = toml::to_string(&cfg).unwrap();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn rejects_missing_required_fields() {
        // channel without power: no silent default
        let broken = SINGLE_HOP.replace("p = 10.0", "");
        let err = RunConfig::from_toml(&broken).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("missing field") && msg.contains("p"), "{msg}");
    }

    #[test]
    fn parse_errors_carry_line_info() {
        let err = RunConfig::from_toml("scenario = \"single_hop\"\nlink = 3\n").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn multi_hop_needs_exactly_one_input_form() {
        let both = r#"
scenario = "multi_hop"
r_min = 1.0
per_hop = [0.1, 0.2]

[link]
b_total = 1.0
n_subcarriers = 1
n0 = 1.0

[[hops]]
channels = [{ m = 1.0, omega = 1.0, p = 1.0 }]
"#;
        assert!(RunConfig::from_toml(both).is_err());
    }

    #[test]
    fn seed_override_wins() {
        let cfg = RunConfig::from_toml(SINGLE_HOP).unwrap();
        assert_eq!(cfg.sim_config(None).unwrap().seed, 0);
        assert_eq!(cfg.sim_config(Some(9)).unwrap().seed, 9);
    }
}
