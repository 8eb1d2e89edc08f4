//! Trajectory records and their JSON-lines form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::GraphSnapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    EdgeOn(usize, usize),
    EdgeOff(usize, usize),
    Infect(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
}

/// One JSON line: `{"t", "kind", "i", "j"}` with `j` null for infections.
#[derive(Serialize, Deserialize)]
struct Line {
    t: f64,
    kind: String,
    i: usize,
    j: Option<usize>,
}

impl From<&Event> for Line {
    fn from(e: &Event) -> Self {
        let (kind, i, j) = match e.kind {
            EventKind::EdgeOn(i, j) => ("edge_on", i, Some(j)),
            EventKind::EdgeOff(i, j) => ("edge_off", i, Some(j)),
            EventKind::Infect(i) => ("infect", i, None),
        };
        Line {
            t: e.t,
            kind: kind.to_string(),
            i,
            j,
        }
    }
}

impl TryFrom<Line> for Event {
    type Error = Error;

    fn try_from(line: Line) -> Result<Self> {
        let kind = match (line.kind.as_str(), line.j) {
            ("edge_on", Some(j)) => EventKind::EdgeOn(line.i, j),
            ("edge_off", Some(j)) => EventKind::EdgeOff(line.i, j),
            ("infect", None) => EventKind::Infect(line.i),
            (k, j) => return Err(invalid("event", format!("kind {k:?} with j = {j:?}"))),
        };
        Ok(Event { t: line.t, kind })
    }
}

/// Time-ordered events on `[0, horizon]` from an initial graph and infected set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventTrajectory {
    pub initial: GraphSnapshot,
    pub initially_infected: Vec<usize>,
    pub horizon: f64,
    pub events: Vec<Event>,
}

impl EventTrajectory {
    pub fn n(&self) -> usize {
        self.initial.n()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let line = serde_json::to_string(&Line::from(e)).expect("plain struct serializes");
            let _ = writeln!(out, "{line}");
        }
        out
    }

    /// Parses event lines; blank lines are skipped.
    pub fn events_from_jsonl(text: &str) -> Result<Vec<Event>> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(no, l)| {
                let line: Line = serde_json::from_str(l)
                    .map_err(|e| invalid("jsonl", format!("line {}: {e}", no + 1)))?;
                Event::try_from(line)
            })
            .collect()
    }

    /// Replays the events, checking ordering and that every transition is legal.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let mut graph = self.initial.clone();
        let mut infected = vec![false; n];
        for &s in &self.initially_infected {
            if s >= n {
                return Err(invalid("initially_infected", format!("node {s} out of range")));
            }
            infected[s] = true;
        }
        let mut last = 0.0;
        for (idx, e) in self.events.iter().enumerate() {
            if !(e.t >= last) || e.t > self.horizon {
                return Err(invalid("events", format!("event {idx} at t = {} is out of order", e.t)));
            }
            last = e.t;
            let ok = match e.kind {
                EventKind::EdgeOn(i, j) => graph.insert(i, j)?,
                EventKind::EdgeOff(i, j) => graph.remove(i, j),
                EventKind::Infect(i) => i < n && !std::mem::replace(&mut infected[i], true),
            };
            if !ok {
                return Err(invalid("events", format!("event {idx} ({:?}) is not a legal transition", e.kind)));
            }
        }
        Ok(())
    }

    /// Graph after all events at times `<= t`.
    pub fn graph_at(&self, t: f64) -> GraphSnapshot {
        let mut g = self.initial.clone();
        for e in self.events.iter().take_while(|e| e.t <= t) {
            match e.kind {
                EventKind::EdgeOn(i, j) => {
                    let _ = g.insert(i, j);
                }
                EventKind::EdgeOff(i, j) => {
                    g.remove(i, j);
                }
                EventKind::Infect(_) => {}
            }
        }
        g
    }

    /// Time-averaged edge count over `[0, horizon]`.
    pub fn mean_edge_count(&self) -> f64 {
        if self.horizon <= 0.0 {
            return self.initial.edge_count() as f64;
        }
        let mut edges = self.initial.edge_count() as f64;
        let mut last = 0.0;
        let mut area = 0.0;
        for e in &self.events {
            match e.kind {
                EventKind::EdgeOn(..) => {
                    area += edges * (e.t - last);
                    last = e.t;
                    edges += 1.0;
                }
                EventKind::EdgeOff(..) => {
                    area += edges * (e.t - last);
                    last = e.t;
                    edges -= 1.0;
                }
                EventKind::Infect(_) => {}
            }
        }
        area += edges * (self.horizon - last);
        area / self.horizon
    }
}

/// Counting process of infections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiTrajectory {
    pub n: usize,
    /// `(time, X)` after each jump, starting with `(0, seed count)`.
    pub jumps: Vec<(f64, usize)>,
    /// `(time, node)` for every infection, seeds included at time 0.
    pub infections: Vec<(f64, usize)>,
    /// Time at which the run stopped.
    pub end_time: f64,
}

impl SiTrajectory {
    pub fn infected(&self) -> usize {
        self.jumps.last().map_or(0, |&(_, x)| x)
    }

    /// `inf { t : X(t) >= k }`, absent if never reached.
    pub fn hitting_time(&self, k: usize) -> Option<f64> {
        let idx = self.jumps.partition_point(|&(_, x)| x < k);
        self.jumps.get(idx).map(|&(t, _)| t)
    }

    /// `tau_k` for every reached `k >= 1`.
    pub fn hitting_times(&self) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        let mut k = 1;
        for &(t, x) in &self.jumps {
            while k <= x {
                out.insert(k, t);
                k += 1;
            }
        }
        out
    }

    /// `X(t)`.
    pub fn infected_at(&self, t: f64) -> usize {
        let idx = self.jumps.partition_point(|&(s, _)| s <= t);
        if idx == 0 {
            0
        } else {
            self.jumps[idx - 1].1
        }
    }

    /// Infection events only, on an edgeless initial graph.
    pub fn to_events(&self) -> EventTrajectory {
        let seeds: Vec<usize> = self
            .infections
            .iter()
            .take_while(|&&(t, _)| t == 0.0)
            .map(|&(_, v)| v)
            .take(self.jumps.first().map_or(0, |&(_, x)| x))
            .collect();
        let events = self.infections[seeds.len()..]
            .iter()
            .map(|&(t, v)| Event {
                t,
                kind: EventKind::Infect(v),
            })
            .collect();
        EventTrajectory {
            initial: GraphSnapshot::empty(self.n),
            initially_infected: seeds,
            horizon: self.end_time,
            events,
        }
    }
}

/// Free-function form of [`SiTrajectory::hitting_time`].
pub fn hitting_time(traj: &SiTrajectory, k: usize) -> Option<f64> {
    traj.hitting_time(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj() -> SiTrajectory {
        SiTrajectory {
            n: 5,
            jumps: vec![(0.0, 1), (0.5, 2), (1.5, 4)],
            infections: vec![(0.0, 0), (0.5, 3), (1.5, 1), (1.5, 2)],
            end_time: 2.0,
        }
    }

    #[test]
    fn hitting_time_lookup() {
        let tr = traj();
        assert_eq!(hitting_time(&tr, 1), Some(0.0));
        assert_eq!(hitting_time(&tr, 2), Some(0.5));
        assert_eq!(hitting_time(&tr, 3), Some(1.5));
        assert_eq!(hitting_time(&tr, 5), None);
        assert_eq!(hitting_time(&tr, 6), None);
        let all = tr.hitting_times();
        assert_eq!(all.len(), 4);
        assert!(all.values().zip(all.values().skip(1)).all(|(a, b)| a <= b));
        assert_eq!(tr.infected_at(1.0), 2);
    }

    #[test]
    fn jsonl_round_trip() {
        let tr = EventTrajectory {
            initial: GraphSnapshot::empty(3),
            initially_infected: vec![0],
            horizon: 2.0,
            events: vec![
                Event { t: 0.25, kind: EventKind::EdgeOn(0, 2) },
                Event { t: 0.5, kind: EventKind::Infect(2) },
                Event { t: 1.0, kind: EventKind::EdgeOff(0, 2) },
            ],
        };
        tr.validate().unwrap();
        let text = tr.to_jsonl();
        assert_eq!(text.lines().next().unwrap(), r#"{"t":0.25,"kind":"edge_on","i":0,"j":2}"#);
        assert!(text.contains(r#""kind":"infect","i":2,"j":null"#));
        assert_eq!(EventTrajectory::events_from_jsonl(&text).unwrap(), tr.events);
        assert!((tr.mean_edge_count() - 0.375).abs() < 1e-15);
    }

    #[test]
    fn illegal_transitions_rejected() {
        let mut tr = EventTrajectory {
            initial: GraphSnapshot::empty(3),
            initially_infected: vec![0],
            horizon: 1.0,
            events: vec![Event { t: 0.1, kind: EventKind::EdgeOff(0, 1) }],
        };
        assert!(tr.validate().is_err());
        tr.events = vec![Event { t: 0.1, kind: EventKind::Infect(0) }];
        assert!(tr.validate().is_err());
        tr.events = vec![
            Event { t: 0.2, kind: EventKind::EdgeOn(0, 1) },
            Event { t: 0.1, kind: EventKind::EdgeOff(0, 1) },
        ];
        assert!(tr.validate().is_err());
        assert!(EventTrajectory::events_from_jsonl(r#"{"t":0,"kind":"infect","i":1,"j":2}"#).is_err());
    }

    #[test]
    fn infection_export() {
        let ev = traj().to_events();
        assert_eq!(ev.initially_infected, vec![0]);
        assert_eq!(ev.events.len(), 3);
        ev.validate().unwrap();
    }
}
