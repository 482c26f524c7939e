//! JSON-lines event log of a solve.
//!
//! One object per line:
//!
//! ```text
//! {"event":"node","region":0,"id":4,"parent":1,"depth":2,"status":"dominance","rule":"fr1a","time":0.013}
//! {"event":"checkpoint","region":0,"nodes":25,"G":0.5,"Gbar":12.5,"HV":3.1,"time":0.020}
//! ```
//!
//! Times are seconds since the solve started, so logs of two runs differ
//! even when everything else matches.

use std::io::{self, Write};

use bobb_core::bb::{Checkpoint, NodeEvent, Observer};
use bobb_core::clock::Clock;
use bobb_core::geometry::GapReport;
use serde::Serialize;

use crate::clock::StdClock;

/// Which gap measures are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GapSelection {
    /// The Hausdorff surrogate `G` and its normalized form `Gbar`.
    Hausdorff,
    /// The hypervolume gap.
    Hv,
    Both,
}

/// A gap report restricted to the selected measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapFields {
    #[serde(rename = "G", skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(rename = "Gbar", skip_serializing_if = "Option::is_none")]
    pub gbar: Option<f64>,
    #[serde(rename = "HV", skip_serializing_if = "Option::is_none")]
    pub hv: Option<f64>,
}

impl GapSelection {
    pub fn fields(self, r: &GapReport) -> GapFields {
        let haus = self != GapSelection::Hv;
        let hv = self != GapSelection::Hausdorff;
        GapFields {
            g: haus.then_some(r.g),
            gbar: haus.then_some(r.gbar),
            hv: hv.then_some(r.hv),
        }
    }
}

/// An event with the time it happened.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stamped {
    Node(NodeEvent, f64),
    Checkpoint(Checkpoint, f64),
}

#[derive(Serialize)]
struct NodeLine<'a> {
    event: &'static str,
    region: usize,
    id: usize,
    parent: Option<usize>,
    depth: usize,
    status: &'a str,
    rule: Option<&'a str>,
    time: f64,
}

#[derive(Serialize)]
struct CheckpointLine {
    event: &'static str,
    region: usize,
    nodes: usize,
    #[serde(flatten)]
    gap: GapFields,
    time: f64,
}

/// Writes events as JSON lines. Write errors are remembered and reported by
/// [`EventLog::finish`] rather than interrupting the solve.
pub struct EventLog<W: Write> {
    out: W,
    clock: StdClock,
    gap: GapSelection,
    error: Option<io::Error>,
}

impl<W: Write> EventLog<W> {
    pub fn new(out: W, clock: StdClock, gap: GapSelection) -> Self {
        Self {
            out,
            clock,
            gap,
            error: None,
        }
    }

    pub fn write(&mut self, ev: &Stamped) {
        if self.error.is_some() {
            return;
        }
        let line = match *ev {
            Stamped::Node(n, time) => serde_json::to_string(&NodeLine {
                event: "node",
                region: n.region,
                id: n.id,
                parent: n.parent,
                depth: n.depth,
                status: n.status.name(),
                rule: n.rule.map(|r| r.name()),
                time,
            }),
            Stamped::Checkpoint(c, time) => serde_json::to_string(&CheckpointLine {
                event: "checkpoint",
                region: c.region,
                nodes: c.nodes,
                gap: self.gap.fields(&c.gap),
                time,
            }),
        }
        .expect("event lines serialize");
        if let Err(e) = writeln!(self.out, "{line}") {
            self.error = Some(e);
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> Observer for EventLog<W> {
    fn node(&mut self, ev: &NodeEvent) {
        let t = self.clock.now();
        self.write(&Stamped::Node(*ev, t));
    }

    fn checkpoint(&mut self, ev: &Checkpoint) {
        let t = self.clock.now();
        self.write(&Stamped::Checkpoint(*ev, t));
    }
}

/// Buffers stamped events, for regions solved on worker threads and
/// replayed in region order afterwards.
#[derive(Debug)]
pub struct Recorder {
    clock: StdClock,
    pub events: Vec<Stamped>,
}

impl Recorder {
    pub fn new(clock: StdClock) -> Self {
        Self {
            clock,
            events: Vec::new(),
        }
    }
}

impl Observer for Recorder {
    fn node(&mut self, ev: &NodeEvent) {
        self.events.push(Stamped::Node(*ev, self.clock.now()));
    }

    fn checkpoint(&mut self, ev: &Checkpoint) {
        self.events.push(Stamped::Checkpoint(*ev, self.clock.now()));
    }
}
