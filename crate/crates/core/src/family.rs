//! One-parameter channel families searched by the threshold routines.

use serde::{Deserialize, Serialize};

use crate::channel::BinaryChannel;
use crate::error::Result;

/// A channel family whose noise grows with its scalar parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelFamily {
    Bsc,
    Bec,
    #[serde(rename = "biawgn")]
    BiAwgn,
    #[serde(rename = "bilc")]
    BiLaplace,
    #[serde(rename = "rayleigh")]
    BiRayleigh,
    /// z-channel: `p01 = 0`, parameter `p10`.
    #[serde(rename = "zchan")]
    ZChannel,
}

impl ChannelFamily {
    pub const ALL: [ChannelFamily; 6] = [
        ChannelFamily::Bsc,
        ChannelFamily::Bec,
        ChannelFamily::BiAwgn,
        ChannelFamily::BiLaplace,
        ChannelFamily::BiRayleigh,
        ChannelFamily::ZChannel,
    ];

    pub fn channel(self, param: f64) -> Result<BinaryChannel> {
        match self {
            ChannelFamily::Bsc => BinaryChannel::bsc(param),
            ChannelFamily::Bec => BinaryChannel::bec(param),
            ChannelFamily::BiAwgn => BinaryChannel::bi_awgn(param),
            ChannelFamily::BiLaplace => BinaryChannel::bi_laplace(param),
            ChannelFamily::BiRayleigh => BinaryChannel::bi_rayleigh(param),
            ChannelFamily::ZChannel => BinaryChannel::z_channel(param),
        }
    }

    /// Search interval for the parameter.
    pub fn range(self) -> (f64, f64) {
        match self {
            ChannelFamily::Bsc => (0.0, 0.5),
            ChannelFamily::Bec | ChannelFamily::ZChannel => (0.0, 1.0),
            ChannelFamily::BiAwgn | ChannelFamily::BiLaplace | ChannelFamily::BiRayleigh => {
                (0.05, 3.0)
            }
        }
    }

    pub fn parameter_name(self) -> &'static str {
        match self {
            ChannelFamily::Bsc => "p",
            ChannelFamily::Bec => "eps",
            ChannelFamily::BiAwgn | ChannelFamily::BiRayleigh => "sigma",
            ChannelFamily::BiLaplace => "lambda",
            ChannelFamily::ZChannel => "p10",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ChannelFamily::Bsc => "bsc",
            ChannelFamily::Bec => "bec",
            ChannelFamily::BiAwgn => "biawgn",
            ChannelFamily::BiLaplace => "bilc",
            ChannelFamily::BiRayleigh => "rayleigh",
            ChannelFamily::ZChannel => "zchan",
        }
    }

    pub fn is_symmetric(self) -> bool {
        self != ChannelFamily::ZChannel
    }
}

impl std::str::FromStr for ChannelFamily {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ChannelFamily::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| format!("unknown family '{s}'"))
    }
}
