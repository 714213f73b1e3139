//! Branch-decision tracing.
//!
//! The model instruments every regime dispatch, every piecewise-formula
//! boundary, and every correction-enable test with a stable site id.
//! Integer decisions that are not booleans (truncation-derived window and
//! table indices) are recorded as index events, since a one-step index
//! shift changes the result without any boolean branch flipping.
//!
//! Two predictions at different precisions can then be compared event by
//! event: the first differing event names the decision that made the
//! outputs diverge. Comparisons inside the quantile-selection routine are
//! deliberately not sites: a flipped ordering there can only move the
//! selected quantile by one rounding step of its inputs.
//!
//! Site ids are stable strings; the 64-bit trace hash folds the id bytes
//! and the outcome with FNV-1a, so hashes are comparable across runs,
//! builds, and platforms.

use std::fmt;

/// Instrumented decision points. `id()` strings are stable and documented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[non_exhaustive]
pub enum BranchSite {
    P2pZsysWindow,
    HznsTxHorizon,
    HznsRxHorizon,
    D1thxShortSegment,
    D1thxKa,
    D1thxK0,
    D1thxAdvance,
    Z1sq1Degenerate,
    Z1sq1WindowLo,
    Z1sq1WindowHi,
    QlrpflLosGeometry,
    QlrpflTwoObstructions,
    LrpropRegimeLos,
    LrpropAedNonneg,
    LrpropD0BeforeD1,
    LrpropLosFit,
    LrpropAk1Clamped,
    LrpropAk2Zero,
    LrpropScatterValid,
    LrpropBeyondDx,
    AknfeSmallArg,
    FhtSmallX,
    FhtAttenuated,
    FhtAboveUnity,
    FhtBlend,
    AlosReflectionBoost,
    AlosPhaseClamp,
    AscatCachedH0,
    AscatWeakSignal,
    AscatEtBelowOne,
    AscatH0Revert,
    H0fEtLow,
    H0fEtHigh,
    H0fIndex,
    H0fInterp,
    AhdNear,
    AhdMid,
    AvarDeNear,
    AvarZtNegative,
    AvarZtBelowZd,
    AvarLowClamp,
}

impl BranchSite {
    pub fn id(&self) -> &'static str {
        use BranchSite::*;
        match self {
            P2pZsysWindow => "p2p.zsys_window",
            HznsTxHorizon => "hzns.tx_horizon",
            HznsRxHorizon => "hzns.rx_horizon",
            D1thxShortSegment => "d1thx.short_segment",
            D1thxKa => "d1thx.ka",
            D1thxK0 => "d1thx.k0",
            D1thxAdvance => "d1thx.advance",
            Z1sq1Degenerate => "z1sq1.degenerate",
            Z1sq1WindowLo => "z1sq1.ja",
            Z1sq1WindowHi => "z1sq1.jb",
            QlrpflLosGeometry => "qlrpfl.los_geometry",
            QlrpflTwoObstructions => "qlrpfl.two_obstructions",
            LrpropRegimeLos => "lrprop.regime_los",
            LrpropAedNonneg => "lrprop.aed_nonneg",
            LrpropD0BeforeD1 => "lrprop.d0_before_d1",
            LrpropLosFit => "lrprop.los_fit_wq",
            LrpropAk1Clamped => "lrprop.ak1_clamped",
            LrpropAk2Zero => "lrprop.ak2_zero",
            LrpropScatterValid => "lrprop.scatter_valid",
            LrpropBeyondDx => "lrprop.beyond_dx",
            AknfeSmallArg => "aknfe.small_arg",
            FhtSmallX => "fht.small_x",
            FhtAttenuated => "fht.attenuated",
            FhtAboveUnity => "fht.above_unity",
            FhtBlend => "fht.blend",
            AlosReflectionBoost => "alos.reflection_boost",
            AlosPhaseClamp => "alos.phase_clamp",
            AscatCachedH0 => "ascat.cached_h0",
            AscatWeakSignal => "ascat.weak_signal",
            AscatEtBelowOne => "ascat.et_below_one",
            AscatH0Revert => "ascat.h0_revert",
            H0fEtLow => "h0f.et_low",
            H0fEtHigh => "h0f.et_high",
            H0fIndex => "h0f.it",
            H0fInterp => "h0f.interp",
            AhdNear => "ahd.near",
            AhdMid => "ahd.mid",
            AvarDeNear => "avar.de_near",
            AvarZtNegative => "avar.zt_negative",
            AvarZtBelowZd => "avar.zt_below_zd",
            AvarLowClamp => "avar.low_clamp",
        }
    }
}

impl fmt::Display for BranchSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Branch { site: BranchSite, taken: bool },
    Index { site: BranchSite, value: i64 },
}

impl TraceEvent {
    pub fn site(&self) -> BranchSite {
        match self {
            TraceEvent::Branch { site, .. } | TraceEvent::Index { site, .. } => *site,
        }
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Branch { site, taken } => write!(f, "{}={}", site.id(), taken),
            TraceEvent::Index { site, value } => write!(f, "{}={}", site.id(), value),
        }
    }
}

/// The ordered record of decisions one prediction made.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BranchTrace {
    events: Vec<TraceEvent>,
}

impl BranchTrace {
    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// First position where two traces disagree, with the event on each
    /// side (`None` past the end of the shorter trace). Returns `None`
    /// when the traces are identical.
    pub fn first_divergence(&self, other: &BranchTrace) -> Option<TraceDivergence> {
        let n = self.events.len().min(other.events.len());
        for i in 0..n {
            if self.events[i] != other.events[i] {
                return Some(TraceDivergence {
                    position: i,
                    ours: Some(self.events[i]),
                    theirs: Some(other.events[i]),
                });
            }
        }
        if self.events.len() != other.events.len() {
            return Some(TraceDivergence {
                position: n,
                ours: self.events.get(n).copied(),
                theirs: other.events.get(n).copied(),
            });
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceDivergence {
    pub position: usize,
    pub ours: Option<TraceEvent>,
    pub theirs: Option<TraceEvent>,
}

impl TraceDivergence {
    /// Site at the divergence point (from whichever side still has an
    /// event there).
    pub fn site(&self) -> Option<BranchSite> {
        self.ours.or(self.theirs).map(|e| e.site())
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Streaming recorder: always folds events into an FNV-1a hash, and keeps
/// the full event list only when built with [`Tracer::recording`].
#[derive(Clone, Debug)]
pub struct Tracer {
    hash: u64,
    events: Option<Vec<TraceEvent>>,
}

impl Tracer {
    /// Hash-only recorder (used in bulk sweeps).
    pub fn hashing() -> Self {
        Self {
            hash: FNV_OFFSET,
            events: None,
        }
    }

    /// Full recorder keeping every event.
    pub fn recording() -> Self {
        Self {
            hash: FNV_OFFSET,
            events: Some(Vec::new()),
        }
    }

    fn fold(&mut self, byte: u8) {
        self.hash = (self.hash ^ byte as u64).wrapping_mul(FNV_PRIME);
    }

    fn fold_event(&mut self, kind: u8, site: BranchSite, payload: &[u8]) {
        self.fold(kind);
        for b in site.id().as_bytes() {
            self.fold(*b);
        }
        self.fold(0xff);
        for b in payload {
            self.fold(*b);
        }
    }

    /// Record a boolean decision and pass the outcome through, so the call
    /// can sit directly inside an `if`.
    pub fn branch(&mut self, site: BranchSite, taken: bool) -> bool {
        self.fold_event(b'B', site, &[taken as u8]);
        if let Some(ev) = &mut self.events {
            ev.push(TraceEvent::Branch { site, taken });
        }
        taken
    }

    /// Record an integer decision (truncation-derived index).
    pub fn index(&mut self, site: BranchSite, value: i64) -> i64 {
        self.fold_event(b'I', site, &value.to_le_bytes());
        if let Some(ev) = &mut self.events {
            ev.push(TraceEvent::Index { site, value });
        }
        value
    }

    pub fn hash(&self) -> u64 {
        self.hash
    }

    pub fn into_trace(self) -> BranchTrace {
        BranchTrace {
            events: self.events.unwrap_or_default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_depends_on_sites_and_outcomes() {
        let mut a = Tracer::hashing();
        a.branch(BranchSite::AknfeSmallArg, true);
        let mut b = Tracer::hashing();
        b.branch(BranchSite::AknfeSmallArg, false);
        assert_ne!(a.hash(), b.hash());
        let mut c = Tracer::hashing();
        c.branch(BranchSite::FhtSmallX, true);
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn recording_and_hashing_agree() {
        let mut a = Tracer::hashing();
        let mut b = Tracer::recording();
        for t in [true, false, true] {
            a.branch(BranchSite::AhdNear, t);
            b.branch(BranchSite::AhdNear, t);
        }
        a.index(BranchSite::H0fIndex, 3);
        b.index(BranchSite::H0fIndex, 3);
        assert_eq!(a.hash(), b.hash());
        assert_eq!(b.into_trace().len(), 4);
    }

    #[test]
    fn first_divergence_positions() {
        let mut a = Tracer::recording();
        let mut b = Tracer::recording();
        a.branch(BranchSite::AknfeSmallArg, true);
        b.branch(BranchSite::AknfeSmallArg, true);
        a.branch(BranchSite::FhtBlend, true);
        b.branch(BranchSite::FhtBlend, false);
        let ta = a.into_trace();
        let tb = b.into_trace();
        let d = ta.first_divergence(&tb).unwrap();
        assert_eq!(d.position, 1);
        assert_eq!(d.site(), Some(BranchSite::FhtBlend));
        assert!(ta.first_divergence(&ta).is_none());
    }

    #[test]
    fn length_mismatch_is_divergence() {
        let mut a = Tracer::recording();
        let mut b = Tracer::recording();
        a.branch(BranchSite::AhdNear, true);
        b.branch(BranchSite::AhdNear, true);
        b.branch(BranchSite::AhdMid, false);
        let d = a.into_trace().first_divergence(&b.into_trace()).unwrap();
        assert_eq!(d.position, 1);
        assert_eq!(d.ours, None);
    }
}
