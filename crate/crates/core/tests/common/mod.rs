#![allow(dead_code)]

use lectern::model::{Camera, EditConfig, FeatureStreams, Scenario, ShotKind};
use lectern::solver::InitState;
use proptest::prelude::*;

/// Small random editing problem: scenario, config and initial state.
#[derive(Clone, Debug)]
pub struct Instance {
    pub scenario: Scenario,
    pub cfg: EditConfig,
    pub init: InitState,
}

pub fn scenario(kinds: &[ShotKind], indicators: Vec<Vec<u8>>) -> Scenario {
    let len = indicators.first().map_or(0, Vec::len);
    Scenario {
        instances_per_second: 1.0,
        len,
        cameras: kinds
            .iter()
            .zip(indicators)
            .enumerate()
            .map(|(i, (&kind, indicator))| Camera {
                id: format!("c{i}"),
                kind,
                indicator,
                features: FeatureStreams::default(),
            })
            .collect(),
    }
}

pub fn kind() -> impl Strategy<Value = ShotKind> {
    (0usize..7).prop_map(|i| ShotKind::ALL[i])
}

/// Instances with up to `max_cams` cameras and `max_len` instances, short
/// expected shot lengths so run-length terms matter within the horizon.
pub fn instance(max_cams: usize, max_len: usize) -> impl Strategy<Value = Instance> {
    (1..=max_cams, 1..=max_len)
        .prop_flat_map(|(c, t)| {
            (
                prop::collection::vec(kind(), c),
                prop::collection::vec(prop::collection::vec(0u8..2, t), c),
                1.0f64..5.0,
                1.0f64..6.0,
                0.0f64..3.0,
                0.0f64..2.0,
                0..c,
                1u32..12,
            )
        })
        .prop_map(|(kinds, ind, l_min, gap, c_sw, c_broll, cam, run)| Instance {
            scenario: scenario(&kinds, ind),
            cfg: EditConfig { l_min, l_max: l_min + gap, c_sw, c_broll, ..EditConfig::default() },
            init: InitState { camera: cam, run_length: run },
        })
}
