//! The transform → ridge → profile chain shared by `sswpt` and
//! `decompose --auto`.

use gmode::ridge::{
    classify_fundamentals, extract_ridges_opts, profile_from_fundamental_opts, RidgeCurve,
    RidgeGroup,
};
use gmode::transform::{forward_wp, synchrosqueeze, TfDistribution};
use gmode::{InstProfile, Signal};

use crate::config::RunConfig;

pub struct SswptOutput {
    pub tf: TfDistribution,
    pub ridges: Vec<RidgeCurve>,
    pub groups: Vec<RidgeGroup>,
    pub profiles: Vec<InstProfile>,
}

/// Run the full instantaneous-property estimation chain on a signal.
pub fn run_sswpt(sig: &Signal, cfg: &RunConfig) -> Result<SswptOutput, String> {
    let wp_cfg = cfg.wave_packet();
    let wp = forward_wp(sig, &wp_cfg).map_err(|e| format!("transform: {e}"))?;
    let tf = synchrosqueeze(&wp, &wp_cfg, cfg.nbins_tf).map_err(|e| format!("squeeze: {e}"))?;
    let ridges = extract_ridges_opts(
        &tf,
        cfg.max_ridges,
        cfg.smoothness_penalty,
        &cfg.ridge_options(),
    )
    .map_err(|e| format!("ridge extraction: {e}"))?;
    if ridges.is_empty() {
        return Err("no ridges found (is the signal empty or the threshold too high?)".into());
    }
    let groups = classify_fundamentals(&ridges, cfg.k, cfg.ridge_tol)
        .map_err(|e| format!("ridge classification: {e}"))?;
    let opts = cfg.profile_options();
    let profiles = groups
        .iter()
        .map(|g| profile_from_fundamental_opts(&g.fundamental, &wp, &wp_cfg, sig.grid(), &opts))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| format!("profile estimation: {e}"))?;
    Ok(SswptOutput {
        tf,
        ridges,
        groups,
        profiles,
    })
}
