//! Event kinematics and the frame-ordering audit.
//!
//! Two events in 1+1 dimensions (natural units, `c = 1`): `EventI` is the
//! Bell measurement on A and C, `EventII` is the correction on B. When they
//! are spacelike separated some inertial frame puts II before I, opening a
//! window `t_II < t < t_I` in which the argument under audit asserts both
//! `ρ^B_t = (Tρ)_B = ρ_C` and `ρ^C_t = ρ_C`.
//!
//! [`audit`] reproduces those assertions and then checks the only relation
//! that would make them a cloning contradiction, `(Tρ)_C = ρ_C`. The verdict
//! depends on that relation alone; the kinematics only decide whether the
//! window exists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{trace_distance, DensityOperator, EQUALITY_TOL};
use crate::teleport::{run_teleport, signal_table, OutcomeSignal};

/// Relative tolerance separating lightlike from spacelike/timelike pairs.
pub const LIGHTLIKE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventLabel {
    EventI,
    EventII,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub label: EventLabel,
    pub t: f64,
    pub x: f64,
}

impl Event {
    pub fn new(label: EventLabel, t: f64, x: f64) -> Result<Self> {
        if !t.is_finite() || !x.is_finite() {
            return Err(Error::InvalidInput(format!(
                "event coordinates must be finite, got ({t}, {x})"
            )));
        }
        Ok(Self { label, t, x })
    }

    /// Default reorderable pair: I at (t=1, x=0), II at (t=1.2, x=5).
    pub fn default_pair() -> (Event, Event) {
        (
            Event {
                label: EventLabel::EventI,
                t: 1.0,
                x: 0.0,
            },
            Event {
                label: EventLabel::EventII,
                t: 1.2,
                x: 5.0,
            },
        )
    }

    /// `t² - x²`
    pub fn interval(&self) -> f64 {
        self.t * self.t - self.x * self.x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBoost {
    pub beta: f64,
}

impl FrameBoost {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta.abs() < 1.0) {
            return Err(Error::InvalidInput(format!(
                "boost velocity must satisfy |beta| < 1, got {beta}"
            )));
        }
        Ok(Self { beta })
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.beta * self.beta).sqrt()
    }
}

/// `t' = γ(t − βx)`, `x' = γ(x − βt)`.
pub fn boost(e: &Event, f: &FrameBoost) -> Result<Event> {
    let f = FrameBoost::new(f.beta)?;
    let g = f.gamma();
    Ok(Event {
        label: e.label,
        t: g * (e.t - f.beta * e.x),
        x: g * (e.x - f.beta * e.t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalType {
    Spacelike,
    Timelike,
    Lightlike,
}

pub fn separation(a: &Event, b: &Event) -> IntervalType {
    let dt = b.t - a.t;
    let dx = b.x - a.x;
    let s = dt * dt - dx * dx;
    let scale = (dt * dt + dx * dx).max(f64::MIN_POSITIVE);
    if s.abs() <= LIGHTLIKE_TOL * scale {
        IntervalType::Lightlike
    } else if s < 0.0 {
        IntervalType::Spacelike
    } else {
        IntervalType::Timelike
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeOrder {
    IBeforeII,
    IIBeforeI,
    Simultaneous,
}

pub fn time_order(e_i: &Event, e_ii: &Event) -> TimeOrder {
    match e_i.t.partial_cmp(&e_ii.t) {
        Some(std::cmp::Ordering::Less) => TimeOrder::IBeforeII,
        Some(std::cmp::Ordering::Greater) => TimeOrder::IIBeforeI,
        _ => TimeOrder::Simultaneous,
    }
}

/// A frame in which `t'_II < t'_I`.
///
/// Timelike and lightlike pairs have a frame-independent order, so there is
/// none. For a spacelike pair already ordered II-before-I the rest frame
/// (`beta = 0`) is returned. Otherwise the reversing velocities form the open
/// interval between `Δt/Δx` and `±1`, and the midpoint is returned.
pub fn find_reordering_boost(e_i: &Event, e_ii: &Event) -> Result<Option<FrameBoost>> {
    let dt = e_ii.t - e_i.t;
    let dx = e_ii.x - e_i.x;
    if dt == 0.0 && dx == 0.0 {
        return Err(Error::InvalidInput("events coincide".into()));
    }
    if separation(e_i, e_ii) != IntervalType::Spacelike {
        return Ok(None);
    }
    if dt < 0.0 {
        return Ok(Some(FrameBoost { beta: 0.0 }));
    }
    // Need γ(Δt − βΔx) < 0, i.e. βΔx > Δt; |Δt| < |Δx| here.
    let threshold = dt / dx;
    let beta = if dx > 0.0 {
        0.5 * (threshold + 1.0)
    } else {
        0.5 * (threshold - 1.0)
    };
    Ok(Some(FrameBoost::new(beta)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoContradiction,
    ForbiddenPattern,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub events: [Event; 2],
    pub interval_type: IntervalType,
    pub rest_order: TimeOrder,
    pub boost: Option<FrameBoost>,
    pub boosted_events: Option<[Event; 2]>,
    pub boosted_order: TimeOrder,
    /// `(t_lo, t_hi) = (t'_II, t'_I)` when the boosted frame has II before I.
    pub window: Option<(f64, f64)>,
    pub input_state: DensityOperator,
    /// `ρ^B_t := (Tρ)_B`
    pub asserted_b_marginal: DensityOperator,
    /// `ρ^C_t := ρ_C`, asserted by the audited argument.
    pub asserted_c_marginal: DensityOperator,
    pub eq_3_7_pattern: bool,
    /// `(Tρ)_C` as computed from the channel.
    pub actual_c_after: DensityOperator,
    pub dist_b: f64,
    pub dist_c_actual: f64,
    pub eq_4_1_holds: bool,
    pub eq_4_2_holds: bool,
    pub verdict: Verdict,
    /// The input is the maximally mixed state, where `(Tρ)_C = ρ_C` does hold.
    pub boundary_case: bool,
    /// Classical outcome bits coordinating the Bell projectors with the corrections.
    pub signals: Vec<OutcomeSignal>,
    pub notes: Vec<String>,
}

pub fn audit(rho_c: &DensityOperator, e_i: &Event, e_ii: &Event) -> Result<ScenarioReport> {
    if rho_c.dim() != 2 {
        return Err(Error::InvalidState(format!(
            "audit input must be a qubit state, got dim {}",
            rho_c.dim()
        )));
    }
    let e_i = Event::new(EventLabel::EventI, e_i.t, e_i.x)?;
    let e_ii = Event::new(EventLabel::EventII, e_ii.t, e_ii.x)?;

    if e_i.t == e_ii.t && e_i.x == e_ii.x {
        return Err(Error::InvalidInput("events coincide".into()));
    }
    let interval_type = separation(&e_i, &e_ii);
    let rest_order = time_order(&e_i, &e_ii);
    let boost_found = find_reordering_boost(&e_i, &e_ii)?;
    let boosted_events = match &boost_found {
        Some(f) => Some([boost(&e_i, f)?, boost(&e_ii, f)?]),
        None => None,
    };
    let boosted_order = boosted_events
        .as_ref()
        .map_or(rest_order, |[a, b]| time_order(a, b));
    let window = boosted_events
        .as_ref()
        .filter(|_| boosted_order == TimeOrder::IIBeforeI)
        .map(|[a, b]| (b.t, a.t));

    let tele = run_teleport(rho_c)?;
    let asserted_b = tele.b_marginal.clone();
    let asserted_c = rho_c.clone();
    let dist_asserted_c = trace_distance(&asserted_c, rho_c)?;
    let eq_3_7_pattern = tele.dist_b <= EQUALITY_TOL && dist_asserted_c <= EQUALITY_TOL;

    let verdict = if tele.eq_4_2_holds {
        Verdict::ForbiddenPattern
    } else {
        Verdict::NoContradiction
    };

    let mut notes = vec![
        "EventI is the Bell measurement on A and C; EventII is the correction on B.".to_string(),
        "The window uses the ordering t_II < t < t_I; the audited argument also writes it as t in (t_I, t_II).".to_string(),
        "The asserted C marginal is the pre-measurement input, not a marginal of the channel output.".to_string(),
    ];
    if window.is_none() {
        notes.push(format!(
            "No reordering frame exists: the events are {} separated, so their order is the same in every frame.",
            match interval_type {
                IntervalType::Timelike => "timelike",
                IntervalType::Lightlike => "lightlike",
                IntervalType::Spacelike => "spacelike",
            }
        ));
    }
    if tele.boundary_case() {
        notes.push(
            "Boundary case: for the maximally mixed input (Tρ)_C equals ρ_C, so the no-copy relation fails on this input only."
                .to_string(),
        );
    }

    Ok(ScenarioReport {
        events: [e_i, e_ii],
        interval_type,
        rest_order,
        boost: boost_found,
        boosted_events,
        boosted_order,
        window,
        input_state: rho_c.clone(),
        asserted_b_marginal: asserted_b,
        asserted_c_marginal: asserted_c,
        eq_3_7_pattern,
        actual_c_after: tele.c_marginal.clone(),
        dist_b: tele.dist_b,
        dist_c_actual: tele.dist_c,
        eq_4_1_holds: tele.eq_4_1_holds,
        eq_4_2_holds: tele.eq_4_2_holds,
        verdict,
        boundary_case: tele.boundary_case(),
        signals: signal_table()?,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::NamedQubit;

    fn ev(label: EventLabel, t: f64, x: f64) -> Event {
        Event::new(label, t, x).unwrap()
    }

    #[test]
    fn zero_boost_is_identity() {
        let e = ev(EventLabel::EventI, 0.3, -2.0);
        assert_eq!(boost(&e, &FrameBoost { beta: 0.0 }).unwrap(), e);
    }

    #[test]
    fn boost_arithmetic() {
        let e = ev(EventLabel::EventII, 0.0, 1.0);
        let b = boost(&e, &FrameBoost { beta: 0.6 }).unwrap();
        assert!((b.t + 0.75).abs() < 1e-15);
        assert!((b.x - 1.25).abs() < 1e-15);
        assert_eq!(b.label, EventLabel::EventII);
    }

    #[test]
    fn boost_rejects_superluminal_frames() {
        let e = ev(EventLabel::EventI, 0.0, 0.0);
        assert!(boost(&e, &FrameBoost { beta: 1.0 }).is_err());
        assert!(boost(&e, &FrameBoost { beta: -1.5 }).is_err());
        assert!(FrameBoost::new(f64::NAN).is_err());
    }

    #[test]
    fn reorders_spacelike_pair() {
        let a = ev(EventLabel::EventI, 1.0, 0.0);
        let b = ev(EventLabel::EventII, 1.5, 10.0);
        let f = find_reordering_boost(&a, &b).unwrap().unwrap();
        assert!((f.beta - 0.525).abs() < 1e-15);
        let (a2, b2) = (boost(&a, &f).unwrap(), boost(&b, &f).unwrap());
        assert!(b2.t < a2.t);
    }

    #[test]
    fn reorders_leftward_pair() {
        let a = ev(EventLabel::EventI, 0.0, 0.0);
        let b = ev(EventLabel::EventII, 0.5, -3.0);
        let f = find_reordering_boost(&a, &b).unwrap().unwrap();
        assert!(f.beta < 0.0);
        assert!(boost(&b, &f).unwrap().t < boost(&a, &f).unwrap().t);
    }

    #[test]
    fn simultaneous_spacelike_pair() {
        let a = ev(EventLabel::EventI, 2.0, 0.0);
        let b = ev(EventLabel::EventII, 2.0, 1.0);
        let f = find_reordering_boost(&a, &b).unwrap().unwrap();
        assert_eq!(f.beta, 0.5);
        assert!(boost(&b, &f).unwrap().t < boost(&a, &f).unwrap().t);
    }

    #[test]
    fn already_reversed_pair_uses_rest_frame() {
        let a = ev(EventLabel::EventI, 2.0, 0.0);
        let b = ev(EventLabel::EventII, 1.0, 4.0);
        assert_eq!(
            find_reordering_boost(&a, &b).unwrap(),
            Some(FrameBoost { beta: 0.0 })
        );
    }

    #[test]
    fn causal_pairs_have_no_reordering_frame() {
        let a = ev(EventLabel::EventI, 0.0, 0.0);
        assert_eq!(
            find_reordering_boost(&a, &ev(EventLabel::EventII, 2.0, 1.0)).unwrap(),
            None
        );
        assert_eq!(
            find_reordering_boost(&a, &ev(EventLabel::EventII, 1.0, 1.0)).unwrap(),
            None
        );
        assert_eq!(
            separation(&a, &ev(EventLabel::EventII, 1.0, 1.0)),
            IntervalType::Lightlike
        );
        assert!(find_reordering_boost(&a, &a).is_err());
    }

    #[test]
    fn audit_default_pair() {
        let (a, b) = Event::default_pair();
        let r = audit(&NamedQubit::Zero.density(), &a, &b).unwrap();
        assert_eq!(r.interval_type, IntervalType::Spacelike);
        assert_eq!(r.rest_order, TimeOrder::IBeforeII);
        assert_eq!(r.boosted_order, TimeOrder::IIBeforeI);
        let (lo, hi) = r.window.unwrap();
        assert!(lo < hi);
        assert!(r.eq_3_7_pattern);
        assert_eq!(r.verdict, Verdict::NoContradiction);
        assert!(r
            .actual_c_after
            .matrix()
            .approx_eq(DensityOperator::maximally_mixed(2).matrix(), 1e-12));
        assert_eq!(r.signals.len(), 4);
        assert_eq!(r.signals[1].bits, "01");
    }

    #[test]
    fn audit_timelike_pair() {
        let a = ev(EventLabel::EventI, 1.0, 0.0);
        let b = ev(EventLabel::EventII, 2.0, 0.0);
        let r = audit(&NamedQubit::Plus.density(), &a, &b).unwrap();
        assert_eq!(r.window, None);
        assert_eq!(r.boost, None);
        assert!(r.eq_3_7_pattern);
        assert_eq!(r.verdict, Verdict::NoContradiction);
        assert!(r.notes.iter().any(|n| n.contains("No reordering frame")));
    }

    #[test]
    fn audit_maximally_mixed_flags_boundary() {
        let (a, b) = Event::default_pair();
        let r = audit(&DensityOperator::maximally_mixed(2), &a, &b).unwrap();
        assert_eq!(r.verdict, Verdict::ForbiddenPattern);
        assert!(r.boundary_case);
        assert!(r.notes.iter().any(|n| n.starts_with("Boundary case")));
    }

    #[test]
    fn audit_relabels_events() {
        let a = Event {
            label: EventLabel::EventII,
            t: 1.0,
            x: 0.0,
        };
        let b = Event {
            label: EventLabel::EventI,
            t: 1.2,
            x: 5.0,
        };
        let r = audit(&NamedQubit::One.density(), &a, &b).unwrap();
        assert_eq!(r.events[0].label, EventLabel::EventI);
        assert_eq!(r.events[1].label, EventLabel::EventII);
    }
}
