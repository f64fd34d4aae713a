use std::io::{self, Write};

use super::PicardStats;
use crate::gdm::DofVector;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot<T> {
    pub step: usize,
    pub time: T,
    pub state: DofVector<T>,
}

/// Output of a time loop: snapshots plus per-step Picard statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub dt: T,
    pub snapshots: Vec<Snapshot<T>>,
    /// Picard iterations of step `m` at index `m − 1`.
    pub picard_iters: Vec<usize>,
    pub clamp_events: Vec<usize>,
    pub last_updates: Vec<f64>,
    /// Whether `δt ≥ 2λ/(C_D + ε)` was detected before the run.
    pub step_bound_violated: bool,
}

impl<T: Scalar> Trajectory<T> {
    pub(crate) fn new(dt: T, step_bound_violated: bool) -> Self {
        Self {
            dt,
            snapshots: Vec::new(),
            picard_iters: Vec::new(),
            clamp_events: Vec::new(),
            last_updates: Vec::new(),
            step_bound_violated,
        }
    }

    pub(crate) fn record_step(&mut self, stats: super::PicardStats) {
        let PicardStats {
            iterations,
            last_update,
            clamp_events,
            ..
        } = stats;
        self.picard_iters.push(iterations);
        self.clamp_events.push(clamp_events);
        self.last_updates.push(last_update);
    }

    pub(crate) fn record_snapshot(&mut self, step: usize, time: T, state: &DofVector<T>) {
        self.snapshots.push(Snapshot {
            step,
            time,
            state: state.clone(),
        });
    }

    pub fn n_steps(&self) -> usize {
        self.picard_iters.len()
    }

    pub fn initial(&self) -> &Snapshot<T> {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &Snapshot<T> {
        self.snapshots.last().expect("trajectory has the initial snapshot")
    }

    pub fn final_state(&self) -> &DofVector<T> {
        &self.last().state
    }

    pub fn max_picard_iters(&self) -> usize {
        self.picard_iters.iter().copied().max().unwrap_or(0)
    }

    pub fn total_clamp_events(&self) -> usize {
        self.clamp_events.iter().sum()
    }

    /// `step,time,picard_iters,clamp_events`, one row per time step.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "step,time,picard_iters,clamp_events")?;
        for (i, (&k, &c)) in self.picard_iters.iter().zip(&self.clamp_events).enumerate() {
            let m = i + 1;
            let t = T::from_usize_lossy(m) * self.dt;
            writeln!(out, "{m},{t},{k},{c}")?;
        }
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Dof dump: `CELLS` then `FACES` sections, one value per line in mesh id
/// order.
pub fn write_dofs<T: Scalar, W: Write>(snapshot: &Snapshot<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "# step {} time {}", snapshot.step, snapshot.time)?;
    let cells = snapshot.state.cells();
    writeln!(out, "CELLS {}", cells.len())?;
    for v in cells {
        writeln!(out, "{v:.17e}")?;
    }
    let faces = snapshot.state.faces();
    writeln!(out, "FACES {}", faces.len())?;
    for v in faces {
        writeln!(out, "{v:.17e}")?;
    }
    Ok(())
}
