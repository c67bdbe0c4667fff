use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{difference_image, fires, gate, Cortex, Reconstruction, SensoryFrame};
use crate::error::{CtnnError, Result};
use crate::nn::mse;
use crate::FRAME_LEN;

/// Outcome of one gated step on a bare signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalStep {
    pub difference: f64,
    pub fired: bool,
}

/// Trace row for one processed frame.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub frame_index: usize,
    pub label: Option<u8>,
    pub difference: f64,
    pub fired: bool,
    /// The incoming frame when fired, the zero frame otherwise.
    pub gate_output: SensoryFrame,
    pub incoming: SensoryFrame,
    pub reconstruction_before: Reconstruction,
    pub reconstruction_after: Reconstruction,
    pub cumulative_network_calls: usize,
}

/// Stream state: the last accepted reconstruction, the threshold and the
/// number of cortex invocations so far.
///
/// The reconstruction starts as the all-zero frame and only changes on a
/// step whose difference reaches the threshold.
#[derive(Debug)]
pub struct CtnnState<'m, C: ?Sized> {
    cortex: &'m C,
    threshold: f64,
    last_reconstruction: Vec<f32>,
    network_calls: usize,
    frames_seen: usize,
}

impl<'m, C: Cortex + ?Sized> CtnnState<'m, C> {
    pub fn new(cortex: &'m C, threshold: f64) -> Result<Self> {
        if !(threshold >= 0.0 && threshold.is_finite()) {
            return Err(CtnnError::InvalidArgument(format!(
                "threshold must be a finite value >= 0, got {threshold}"
            )));
        }
        Ok(CtnnState {
            cortex,
            threshold,
            last_reconstruction: vec![0.0; cortex.width()],
            network_calls: 0,
            frames_seen: 0,
        })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn network_calls(&self) -> usize {
        self.network_calls
    }

    pub fn frames_seen(&self) -> usize {
        self.frames_seen
    }

    pub fn last_reconstruction(&self) -> &[f32] {
        &self.last_reconstruction
    }

    /// Compares, gates, and on a fire replaces the reconstruction with the
    /// cortex's output for `incoming`.
    pub fn step_signal(&mut self, incoming: &[f32]) -> Result<SignalStep> {
        let difference = mse(incoming, &self.last_reconstruction)?;
        let fired = fires(difference, self.threshold);
        if fired {
            let recon = self.cortex.reconstruct(incoming)?;
            CtnnError::check_len(self.last_reconstruction.len(), recon.len())?;
            self.last_reconstruction = recon;
            self.network_calls += 1;
        }
        self.frames_seen += 1;
        Ok(SignalStep { difference, fired })
    }

    pub fn step(&mut self, incoming: &SensoryFrame) -> Result<StepRecord> {
        CtnnError::check_len(FRAME_LEN, self.cortex.width())?;
        let frame_index = self.frames_seen;
        let before = Reconstruction::from_raw(self.last_reconstruction.clone());
        let SignalStep { difference, fired } = self.step_signal(incoming.pixels())?;
        Ok(StepRecord {
            frame_index,
            label: incoming.label(),
            difference,
            fired,
            gate_output: gate(incoming, difference, self.threshold),
            incoming: incoming.clone(),
            reconstruction_before: before,
            reconstruction_after: Reconstruction::from_raw(self.last_reconstruction.clone()),
            cumulative_network_calls: self.network_calls,
        })
    }
}

/// Full trace of a stream run plus its summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceTrace {
    pub records: Vec<StepRecord>,
    pub network_calls: usize,
}

impl SequenceTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `frame_index,label,D,fired,cumulative_network_calls`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frame_index,label,D,fired,cumulative_network_calls\n");
        for r in &self.records {
            let label = r.label.map(|l| l.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{:.6},{},{}",
                r.frame_index,
                label,
                r.difference,
                u8::from(r.fired),
                r.cumulative_network_calls
            );
        }
        out
    }

    /// Writes four PGMs per step: previous reconstruction, incoming frame,
    /// difference image and new reconstruction.
    pub fn dump_images(&self, dir: &Path) -> Result<usize> {
        fs::create_dir_all(dir).map_err(|e| CtnnError::io(dir, e))?;
        let mut written = 0;
        for r in &self.records {
            let i = r.frame_index;
            let images = [
                ("a_previous", r.reconstruction_before.to_image()),
                ("b_incoming", r.incoming.to_image()),
                (
                    "c_difference",
                    difference_image(&r.incoming, &r.reconstruction_before),
                ),
                ("d_reconstruction", r.reconstruction_after.to_image()),
            ];
            for (name, img) in images {
                img.save(dir.join(format!("step{i:04}_{name}.pgm")))?;
                written += 1;
            }
        }
        Ok(written)
    }
}

/// Runs a fresh state over `frames` in order.
pub fn run_sequence<C: Cortex + ?Sized>(
    cortex: &C,
    threshold: f64,
    frames: &[SensoryFrame],
) -> Result<SequenceTrace> {
    if frames.is_empty() {
        return Err(CtnnError::InvalidArgument("empty frame sequence".into()));
    }
    let mut state = CtnnState::new(cortex, threshold)?;
    let records = frames
        .iter()
        .map(|f| state.step(f))
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceTrace {
        records,
        network_calls: state.network_calls(),
    })
}

/// [`run_sequence`] for bare signals of any width; returns per-step outcomes.
pub fn run_signals<C: Cortex + ?Sized>(
    cortex: &C,
    threshold: f64,
    signals: &[Vec<f32>],
) -> Result<(Vec<SignalStep>, usize)> {
    let mut state = CtnnState::new(cortex, threshold)?;
    let steps = signals
        .iter()
        .map(|s| state.step_signal(s))
        .collect::<Result<Vec<_>>>()?;
    Ok((steps, state.network_calls()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reconstructs perfectly.
    struct Mirror(usize);
    impl Cortex for Mirror {
        fn width(&self) -> usize {
            self.0
        }
        fn reconstruct(&self, incoming: &[f32]) -> Result<Vec<f32>> {
            Ok(incoming.to_vec())
        }
    }

    fn flat(v: f32, label: u8) -> SensoryFrame {
        SensoryFrame::new(vec![v; FRAME_LEN], Some(label)).unwrap()
    }

    #[test]
    fn first_frame_fires_against_zero_reconstruction() {
        let cortex = Mirror(FRAME_LEN);
        let mut state = CtnnState::new(&cortex, 100.0).unwrap();
        // D against the zero frame is 120^2 = 14400.
        let rec = state.step(&flat(120.0, 3)).unwrap();
        assert!(rec.fired);
        assert_eq!(rec.difference, 14400.0);
        assert_eq!(state.network_calls(), 1);
        assert!(rec.reconstruction_before.pixels().iter().all(|&v| v == 0.0));
        assert_eq!(rec.gate_output, flat(120.0, 3));

        // Similar frame: D = 25 < 100, nothing changes.
        let rec = state.step(&flat(125.0, 3)).unwrap();
        assert!(!rec.fired);
        assert!(rec.gate_output.is_zero());
        assert_eq!(rec.reconstruction_after, rec.reconstruction_before);
        assert_eq!(state.network_calls(), 1);
        assert_eq!(state.frames_seen(), 2);
    }

    #[test]
    fn unreachable_threshold_never_fires() {
        let cortex = Mirror(FRAME_LEN);
        let frames: Vec<_> = (0..5)
            .map(|i| flat(if i % 2 == 0 { 255.0 } else { 0.0 }, 1))
            .collect();
        let trace = run_sequence(&cortex, 65026.0, &frames).unwrap();
        assert_eq!(trace.network_calls, 0);
        assert!(trace.records.iter().all(|r| !r.fired));
    }

    #[test]
    fn zero_threshold_always_fires() {
        let cortex = Mirror(FRAME_LEN);
        let frames: Vec<_> = (0..4).map(|_| flat(0.0, 1)).collect();
        let trace = run_sequence(&cortex, 0.0, &frames).unwrap();
        assert_eq!(trace.network_calls, 4);
    }

    #[test]
    fn rejects_bad_threshold_and_empty_input() {
        let cortex = Mirror(4);
        assert!(CtnnState::new(&cortex, -1.0).is_err());
        assert!(CtnnState::new(&cortex, f64::NAN).is_err());
        assert!(run_sequence(&Mirror(FRAME_LEN), 1.0, &[]).is_err());
    }

    #[test]
    fn csv_layout() {
        let cortex = Mirror(FRAME_LEN);
        let trace = run_sequence(&cortex, 100.0, &[flat(10.0, 2), flat(11.0, 2)]).unwrap();
        assert_eq!(
            trace.to_csv(),
            "frame_index,label,D,fired,cumulative_network_calls\n\
             0,2,100.000000,1,1\n\
             1,2,1.000000,0,1\n"
        );
    }

    #[test]
    fn dumps_four_images_per_step() {
        let dir = tempfile::tempdir().unwrap();
        let cortex = Mirror(FRAME_LEN);
        let trace =
            run_sequence(&cortex, 1.0, &[flat(10.0, 2), flat(90.0, 4), flat(91.0, 4)]).unwrap();
        assert_eq!(trace.dump_images(dir.path()).unwrap(), 12);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 12);
    }

    #[test]
    fn higher_threshold_can_fire_more_often() {
        // Calls are not monotone in the threshold for every stream: at 5 the
        // first frame is accepted and covers the rest, at 10 it is skipped
        // and the later frames are each too far from what is held.
        let stream = [vec![3.0], vec![5.0], vec![1.0]];
        assert_eq!(run_signals(&Mirror(1), 5.0, &stream).unwrap().1, 1);
        assert_eq!(run_signals(&Mirror(1), 10.0, &stream).unwrap().1, 2);
    }

    #[test]
    fn signal_width_mismatch_is_an_error() {
        let cortex = Mirror(3);
        let mut state = CtnnState::new(&cortex, 0.0).unwrap();
        assert!(state.step_signal(&[1.0, 2.0]).is_err());
        assert!(state.step(&flat(1.0, 1)).is_err());
    }
}
