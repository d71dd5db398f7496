use std::thread;

use hermite_core::derham::{derham_mask, derham_parameter};
use hermite_core::exact::text;
use hermite_core::spectral::{infer_tau, reproduction_order, spectral_order};
use hermite_core::sumrule::{lemma4_crosscheck, sumrule_order, Lemma4Report, Sign};
use hermite_core::{Mask, MomentWitness, Rational, SpectralReport};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct MaskInfo {
    pub mask: String,
    pub d: usize,
    pub support: [i64; 2],
    pub interpolatory: bool,
    pub symmetric: bool,
}

impl MaskInfo {
    pub fn new(identity: &str, mask: &Mask) -> Self {
        let (lo, hi) = mask.support();
        Self {
            mask: identity.to_string(),
            d: mask.d(),
            support: [lo, hi],
            interpolatory: mask.is_interpolatory(),
            symmetric: mask.is_symmetric(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SumRuleSummary {
    pub order: Option<usize>,
    pub sigma: Option<Sign>,
    pub witness: Option<MomentWitness>,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    #[serde(flatten)]
    pub info: MaskInfo,
    pub spectral: SpectralReport,
    #[serde(serialize_with = "text::option_rational")]
    pub inferred_tau: Option<Rational>,
    /// `tau` is `null` when none was given and none could be inferred.
    pub reproduction: Reproduction,
    pub sumrule: SumRuleSummary,
    pub lemma4: Lemma4Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derham_summary: Option<DeRhamSummary>,
}

#[derive(Debug, Serialize)]
pub struct Reproduction {
    #[serde(serialize_with = "text::option_rational")]
    pub tau: Option<Rational>,
    pub order: Option<usize>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum DeRhamSummary {
    Report(Box<AnalysisReport>),
    Vanishes { vanishes: bool },
}

/// Broken internal invariant; maps to its own exit code.
#[derive(Debug)]
pub struct InvariantViolation(pub String);

pub struct Options {
    pub max_order: usize,
    pub tau: Option<Rational>,
    pub derham: bool,
}

pub fn analyze(
    identity: &str,
    mask: &Mask,
    opts: &Options,
) -> Result<AnalysisReport, InvariantViolation> {
    let (spectral, inferred_tau, sumrule, lemma4, transformed) = thread::scope(|s| {
        let spectral = s.spawn(|| spectral_order(mask, opts.max_order));
        let sumrule =
            s.spawn(|| sumrule_order(mask, opts.max_order).expect("max order checked against d"));
        let lemma4 = s.spawn(|| lemma4_crosscheck(mask));
        let transformed = opts.derham.then(|| s.spawn(|| derham_mask(mask).ok()));
        let inferred = infer_tau(mask);
        (
            spectral.join().expect("spectral analysis"),
            inferred,
            sumrule.join().expect("sum-rule analysis"),
            lemma4.join().expect("cross-check"),
            transformed.map(|h| h.join().expect("de Rham transform")),
        )
    });

    let tau = opts.tau.clone().or_else(|| inferred_tau.clone());
    let reproduction = Reproduction {
        order: tau
            .as_ref()
            .and_then(|t| reproduction_order(mask, t, opts.max_order)),
        tau,
    };
    if let Some(r) = reproduction.order {
        // Reproduction is a special spectral condition.
        if spectral.order < r as i64 {
            return Err(InvariantViolation(format!(
                "reproduction order {r} exceeds spectral order {}",
                spectral.order
            )));
        }
    }

    let derham_summary = match transformed {
        None => None,
        Some(None) => Some(DeRhamSummary::Vanishes { vanishes: true }),
        Some(Some(t)) => {
            let sub = Options {
                max_order: opts.max_order,
                tau: reproduction.tau.as_ref().map(derham_parameter),
                derham: false,
            };
            Some(DeRhamSummary::Report(Box::new(analyze(
                &format!("derham({identity})"),
                &t,
                &sub,
            )?)))
        }
    };

    Ok(AnalysisReport {
        info: MaskInfo::new(identity, mask),
        spectral,
        inferred_tau,
        reproduction,
        sumrule: SumRuleSummary {
            order: sumrule.order,
            sigma: sumrule.sign,
            witness: sumrule.witness,
        },
        lemma4,
        derham_summary,
    })
}
