//! The divisor-class table on Gr(2, 10): slice counts from a campaign, the
//! Schubert pairing, and the j-map multiplicities put together.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quartic::ProjValue;
use crate::rat::Rat;
use crate::schubert::{degree, divisor_class_report, pieri_sigma1, Partition2};
use crate::slice::{slice_campaign, CampaignReport};

/// Generic j-value standing in for an arbitrary fiber `F_a`.
pub const GENERIC_VALUE: i64 = 5;

/// Values every class-table campaign must test.
pub fn table_test_values() -> Vec<Rat> {
    [GENERIC_VALUE, 1728, 0].map(Rat::from_int).to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub class: String,
    /// Points of the divisor on one slice, with multiplicity.
    pub slice_count: i64,
    pub pairing: i64,
    /// Multiplicity of the fiber over the orbit closure (1 for F_a and T).
    pub multiplicity: u32,
    pub statement: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTable {
    pub n_trials: usize,
    pub seed: u64,
    pub height: i64,
    pub total_retries: u64,
    /// `σ₁ · σ_{8,7}` on Gr(2, 10).
    pub pairing: i64,
    /// Keys `F_a`, `O_1728`, `O_0`, `T`.
    pub classes: BTreeMap<String, ClassEntry>,
}

/// The count shared by every trial, or an error naming the trials that
/// disagree.
fn common_count(campaign: &CampaignReport, what: &str, count: impl Fn(usize) -> Option<usize>) -> Result<i64> {
    let mut values = BTreeMap::<usize, Vec<u64>>::new();
    for (i, t) in campaign.trials.iter().enumerate() {
        let c = count(i).ok_or_else(|| {
            Error::InvalidArgument(format!("campaign did not test {what}"))
        })?;
        values.entry(c).or_default().push(t.seed);
    }
    if values.len() != 1 {
        return Err(Error::CampaignFailed {
            what: what.to_string(),
            counts: values.into_iter().collect(),
        });
    }
    Ok(*values.keys().next().unwrap() as i64)
}

pub fn class_table(campaign: &CampaignReport) -> Result<ClassTable> {
    let pairing = degree(&pieri_sigma1(&Partition2::new(8, 7, 10)?))?;
    let fiber = |a: i64| {
        let key = Rat::from_int(a).to_fraction_string();
        common_count(campaign, &format!("j = {a}"), move |i| {
            campaign.trials[i].j_fiber_counts.get(&key).copied()
        })
    };
    let tangents = common_count(campaign, "tangent lines", |i| {
        Some(campaign.trials[i].tangent_count_with_multiplicity)
    })?;

    let mut classes = BTreeMap::new();
    let rows: [(&str, i64, ProjValue, &'static str); 4] = [
        (
            "F_a",
            fiber(GENERIC_VALUE)?,
            ProjValue::Finite(Rat::from_int(GENERIC_VALUE)),
            "a general j-fiber meets a general pencil-of-lines slice in 12 points",
        ),
        (
            "O_1728",
            fiber(1728)?,
            ProjValue::Finite(Rat::from_int(1728)),
            "the fiber over 1728 is twice the orbit closure",
        ),
        (
            "O_0",
            fiber(0)?,
            ProjValue::Finite(Rat::zero()),
            "the fiber over 0 is three times the orbit closure",
        ),
        (
            "T",
            tangents,
            ProjValue::Infinity,
            "twelve simple tangent lines through a general point of a general plane",
        ),
    ];
    for (name, count, a, statement) in rows {
        let r = divisor_class_report(count, &a)?;
        classes.insert(
            name.to_string(),
            ClassEntry {
                class: r.reduced_class.to_string(),
                slice_count: count,
                pairing: r.pairing,
                multiplicity: r.multiplicity,
                statement,
            },
        );
    }
    Ok(ClassTable {
        n_trials: campaign.n_trials,
        seed: campaign.seed,
        height: campaign.height,
        total_retries: campaign.total_retries,
        pairing,
        classes,
    })
}

/// Runs a campaign testing [`table_test_values`] and assembles the table.
pub fn reproduce_class_table(n_trials: usize, seed: u64, height: i64) -> Result<ClassTable> {
    let campaign = slice_campaign(n_trials, seed, height, &table_test_values())?;
    class_table(&campaign)
}
