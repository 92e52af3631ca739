use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::MultiTierSynthesis;
use crate::error::{Error, Result};
use crate::games::{strategy_entries, with_coop, StrategyDocument, STRATEGY_FORMAT_VERSION};

pub const BUNDLE_VERSION: u32 = 1;
pub const TIE_BREAK_RULE: &str = "lexicographic-action-name";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleReport {
    pub single_solves: usize,
    pub pair_solves: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    pub domain_sha256: String,
    pub goals: Vec<String>,
    pub tie_break: String,
    pub objectives: Vec<String>,
    pub pairs: Vec<String>,
    pub report: BundleReport,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Writes the manifest and one strategy file per objective and per pair.
/// Output depends only on the synthesis, so equal inputs give equal bytes.
pub fn write_bundle(s: &MultiTierSynthesis, dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let goals: Vec<String> = s.goals.iter().map(|g| g.to_string()).collect();
    let mut objectives = Vec::new();
    for (i, single) in s.singles.iter().enumerate() {
        let ts = &single.arena.ts;
        let doc = StrategyDocument {
            version: STRATEGY_FORMAT_VERSION,
            objective_index: Some(i + 1),
            pair: None,
            formulas: vec![goals[i].clone()],
            states: with_coop(strategy_entries(ts, &single.win.strategy, &single.win.rank), ts, &single.coop),
            initial: ts.initial(),
        };
        let name = format!("objective-{}.json", i + 1);
        write_json(&dir.join(&name), &doc)?;
        objectives.push(name);
    }
    let mut pairs = Vec::new();
    for p in &s.pairs {
        let (i, j) = p.tiers;
        let ts = p.arena.ts();
        let doc = StrategyDocument {
            version: STRATEGY_FORMAT_VERSION,
            objective_index: None,
            pair: Some([i + 1, j + 1]),
            formulas: vec![goals[i].clone(), goals[j].clone()],
            states: strategy_entries(ts, &p.wp.strategy, &p.wp.rank),
            initial: ts.initial(),
        };
        let name = format!("pair-{}-{}.json", i + 1, j + 1);
        write_json(&dir.join(&name), &doc)?;
        pairs.push(name);
    }
    let manifest = Manifest {
        version: BUNDLE_VERSION,
        domain_sha256: s.domain.fingerprint().to_string(),
        goals,
        tie_break: TIE_BREAK_RULE.to_string(),
        objectives,
        pairs,
        report: BundleReport {
            single_solves: s.counts.single_solves,
            pair_solves: s.counts.pair_solves,
        },
    };
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(dir.join(MANIFEST_FILE))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::BundleMismatch(e.to_string()))?;
    if m.version != BUNDLE_VERSION {
        return Err(Error::BundleMismatch(format!("unsupported bundle version {}", m.version)));
    }
    if m.tie_break != TIE_BREAK_RULE {
        return Err(Error::BundleMismatch(format!("unknown tie-break rule `{}`", m.tie_break)));
    }
    Ok(m)
}
