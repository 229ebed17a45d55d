//! Experiments on labeled datasets: per-class SOD of set-median vs.
//! generalized median, and 1-NN classification with median prototypes.

use std::fmt::{self, Write};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::ged::compute_ged;
use crate::graph::AttributedGraph;
use crate::io::DatasetDescriptor;
use crate::median::{compute_median, DescentConfig, MedianResult};
use crate::seed::{derive_seed, rng_for};

const SAMPLE_STREAM: u64 = 10;
const SPLIT_STREAM: u64 = 11;
const SOLVER_STREAM: u64 = 12;
const CLASSIFY_STREAM: u64 = 13;

/// Graphs drawn per class: an absolute count or a fraction of the class size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleSize {
    Count(usize),
    Fraction(f64),
}

impl SampleSize {
    /// Number of graphs to draw from a class of `class_size` graphs.
    pub fn resolve(&self, class_size: usize) -> usize {
        match *self {
            SampleSize::Count(k) => k,
            SampleSize::Fraction(f) => (f * class_size as f64).round() as usize,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SampleSize::Count(0) => Err(Error::InvalidConfig("sample count must be >= 1".into())),
            SampleSize::Fraction(f) if !(f > 0.0 && f <= 1.0) => Err(Error::InvalidConfig(
                format!("sample fraction {f} is not in (0, 1]"),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Count(k) => write!(f, "{k}"),
            SampleSize::Fraction(x) => write!(f, "{x}"),
        }
    }
}

impl std::str::FromStr for SampleSize {
    type Err = Error;

    /// Integers are counts, anything with a decimal point or exponent a fraction.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadValue {
            value: s.to_string(),
            expected: "a count or a fraction",
        };
        if let Ok(k) = s.parse::<usize>() {
            return Ok(SampleSize::Count(k));
        }
        s.parse::<f64>()
            .map(SampleSize::Fraction)
            .map_err(|_| bad())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Per-class sample for SOD runs, per-class train share for classification.
    pub sample: SampleSize,
    pub repeats: usize,
    pub seed: u64,
    pub model: CostModel,
    pub descent: DescentConfig,
}

impl ExperimentConfig {
    pub fn new(model: CostModel, descent: DescentConfig) -> Self {
        ExperimentConfig {
            sample: SampleSize::Count(10),
            repeats: 1,
            seed: 0,
            model,
            descent,
        }
    }

    fn validate(&self) -> Result<()> {
        self.sample.validate()?;
        if self.repeats == 0 {
            return Err(Error::InvalidConfig("repeats must be >= 1".into()));
        }
        Ok(())
    }

    /// Descent config whose solver seeds depend on `path`.
    fn descent_for(&self, path: &[u64]) -> DescentConfig {
        let seed = derive_seed(self.seed, path);
        DescentConfig {
            phase1: self.descent.phase1.with_seed(derive_seed(seed, &[1])),
            phase2: self.descent.phase2.with_seed(derive_seed(seed, &[2])),
            ..self.descent
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SodRow {
    pub class: String,
    pub repeat: usize,
    pub sod_sm: f64,
    /// Phase 1 time.
    pub t_sm: Duration,
    pub sod_gm: f64,
    /// Phase 2 time only.
    pub t_gm: Duration,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SodReport {
    pub rows: Vec<SodRow>,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn secs(d: Duration, timings: bool) -> f64 {
    if timings {
        d.as_secs_f64()
    } else {
        0.0
    }
}

impl SodReport {
    pub fn mean_sod_sm(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.sod_sm))
    }

    pub fn mean_sod_gm(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.sod_gm))
    }

    pub fn mean_t_sm(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.t_sm.as_secs_f64()))
    }

    pub fn mean_t_gm(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.t_gm.as_secs_f64()))
    }

    /// Rows with `sod_gm > sod_sm` beyond rounding.
    pub fn violations(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.sod_gm > r.sod_sm + 1e-9 * r.sod_sm.max(1.0))
            .count()
    }

    /// CSV with header `class,repeat,sod_sm,t_sm,sod_gm,t_gm`. Without
    /// `timings` the time columns are 0 so that reports are reproducible byte for byte.
    pub fn to_csv(&self, timings: bool) -> String {
        let mut out = String::from("class,repeat,sod_sm,t_sm,sod_gm,t_gm\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{:.6},{:.6},{:.6},{:.6}",
                csv_field(&r.class),
                r.repeat,
                r.sod_sm,
                secs(r.t_sm, timings),
                r.sod_gm,
                secs(r.t_gm, timings)
            )
            .unwrap();
        }
        out
    }

    /// Aligned table followed by the means.
    pub fn to_table(&self, timings: bool) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.class.len())
            .max()
            .unwrap_or(0)
            .max(5);
        let mut out = format!(
            "{:<width$} {:>6} {:>14} {:>10} {:>14} {:>10} {:>5}\n",
            "class", "repeat", "SOD SM", "t(SM) s", "SOD GM", "t(GM) s", "iter"
        );
        for r in &self.rows {
            writeln!(
                out,
                "{:<width$} {:>6} {:>14.4} {:>10.4} {:>14.4} {:>10.4} {:>5}",
                r.class,
                r.repeat,
                r.sod_sm,
                secs(r.t_sm, timings),
                r.sod_gm,
                secs(r.t_gm, timings),
                r.iterations
            )
            .unwrap();
        }
        let t = |x: f64| if timings { x } else { 0.0 };
        writeln!(
            out,
            "{:<width$} {:>6} {:>14.4} {:>10.4} {:>14.4} {:>10.4}",
            "mean",
            "",
            self.mean_sod_sm(),
            t(self.mean_t_sm()),
            self.mean_sod_gm(),
            t(self.mean_t_gm())
        )
        .unwrap();
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One SOD run: samples class `class` for repeat `repeat` and computes its
/// median. Returns the sampled dataset indices with the result.
pub fn sod_run(
    dataset: &DatasetDescriptor,
    class: usize,
    repeat: usize,
    config: &ExperimentConfig,
) -> Result<(Vec<usize>, MedianResult)> {
    config.validate()?;
    let members = dataset.class_members(class);
    let k = config.sample.resolve(members.len());
    if k == 0 || k > members.len() {
        return Err(Error::ClassTooSmall {
            class: dataset.class_names[class].clone(),
            size: members.len(),
            sample: k,
        });
    }
    let mut rng = rng_for(config.seed, &[SAMPLE_STREAM, class as u64, repeat as u64]);
    let mut picked: Vec<usize> = sample(&mut rng, members.len(), k)
        .into_iter()
        .map(|i| members[i])
        .collect();
    picked.sort_unstable();
    let graphs: Vec<AttributedGraph> = picked
        .iter()
        .map(|&i| dataset.entries[i].graph.clone())
        .collect();
    let descent = config.descent_for(&[SOLVER_STREAM, class as u64, repeat as u64]);
    let result = compute_median(&config.model, &graphs, &descent)?;
    Ok((picked, result))
}

/// Runs `config.repeats` SOD runs for every class.
pub fn run_sod_experiment(
    dataset: &DatasetDescriptor,
    config: &ExperimentConfig,
) -> Result<SodReport> {
    config.validate()?;
    if dataset.entries.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let jobs: Vec<(usize, usize)> = (0..dataset.class_count())
        .flat_map(|c| (0..config.repeats).map(move |r| (c, r)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(c, r)| {
            let (_, m) = sod_run(dataset, c, r, config)?;
            log::info!(
                "class {} repeat {r}: SM {:.4} -> GM {:.4} in {} iterations",
                dataset.class_names[c],
                m.set_median_sod,
                m.sod(),
                m.iterations()
            );
            Ok(SodRow {
                class: dataset.class_names[c].clone(),
                repeat: r,
                sod_sm: m.set_median_sod,
                t_sm: m.phase1_time,
                sod_gm: m.sod(),
                t_gm: m.phase2_time,
                iterations: m.iterations(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SodReport { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrainingMode {
    /// One set-median per class.
    SetMedian,
    /// One generalized median per class.
    GeneralizedMedian,
    /// The whole training set.
    TrainSet,
}

impl TrainingMode {
    pub const ALL: [TrainingMode; 3] = [
        TrainingMode::SetMedian,
        TrainingMode::GeneralizedMedian,
        TrainingMode::TrainSet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TrainingMode::SetMedian => "SM",
            TrainingMode::GeneralizedMedian => "GM",
            TrainingMode::TrainSet => "TS",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeResult {
    pub mode: TrainingMode,
    pub accuracy_pct: f64,
    pub time: Duration,
    /// GED computations performed to classify the test set.
    pub distance_evals: usize,
    /// Predicted class of every test graph.
    pub predictions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifReport {
    pub modes: Vec<ModeResult>,
    /// Time to compute the per-class medians.
    pub pt: Duration,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl ClassifReport {
    pub fn mode(&self, mode: TrainingMode) -> &ModeResult {
        self.modes
            .iter()
            .find(|m| m.mode == mode)
            .expect("every mode is evaluated")
    }

    /// CSV with header `mode,accuracy_pct,time_s,pt`.
    pub fn to_csv(&self, timings: bool) -> String {
        let mut out = String::from("mode,accuracy_pct,time_s,pt\n");
        for m in &self.modes {
            writeln!(
                out,
                "{},{:.4},{:.6},{:.6}",
                m.mode.name(),
                m.accuracy_pct,
                secs(m.time, timings),
                secs(self.pt, timings)
            )
            .unwrap();
        }
        out
    }

    pub fn to_table(&self, timings: bool) -> String {
        let mut out = format!(
            "{:<4} {:>9} {:>10} {:>10} {:>10}\n",
            "mode", "accuracy", "time s", "distances", "pt s"
        );
        for m in &self.modes {
            writeln!(
                out,
                "{:<4} {:>8.2}% {:>10.4} {:>10} {:>10.4}",
                m.mode.name(),
                m.accuracy_pct,
                secs(m.time, timings),
                m.distance_evals,
                secs(self.pt, timings)
            )
            .unwrap();
        }
        out
    }
}

/// Per-class train/test split: `config.sample` of each class is drawn as
/// training graphs, the rest are test graphs. Both lists are sorted.
pub fn split_dataset(
    dataset: &DatasetDescriptor,
    config: &ExperimentConfig,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for c in 0..dataset.class_count() {
        let mut members = dataset.class_members(c);
        let k = config.sample.resolve(members.len());
        if k == 0 || k >= members.len() {
            return Err(Error::DegenerateSplit(format!(
                "class `{}` has {} graphs, {k} of them for training",
                dataset.class_names[c],
                members.len()
            )));
        }
        members.shuffle(&mut rng_for(config.seed, &[SPLIT_STREAM, c as u64]));
        train.extend_from_slice(&members[..k]);
        test.extend_from_slice(&members[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// 1-NN classification of the test split with three training sets: the
/// per-class set-medians, the per-class generalized medians and the whole
/// training split. Distances from a test graph to a prototype use the phase-2
/// solver; ties go to the smallest class index.
pub fn run_classification(
    dataset: &DatasetDescriptor,
    config: &ExperimentConfig,
) -> Result<ClassifReport> {
    config.validate()?;
    if dataset.class_count() < 2 {
        return Err(Error::DegenerateSplit(format!(
            "classification needs at least 2 classes, found {}",
            dataset.class_count()
        )));
    }
    let (train, test) = split_dataset(dataset, config)?;

    let start = Instant::now();
    let medians = (0..dataset.class_count())
        .into_par_iter()
        .map(|c| {
            let members: Vec<usize> = train
                .iter()
                .copied()
                .filter(|&i| dataset.entries[i].class == c)
                .collect();
            let graphs: Vec<AttributedGraph> = members
                .iter()
                .map(|&i| dataset.entries[i].graph.clone())
                .collect();
            let m = compute_median(
                &config.model,
                &graphs,
                &config.descent_for(&[SOLVER_STREAM, c as u64]),
            )?;
            Ok((members[m.set_median_index], m.median))
        })
        .collect::<Result<Vec<_>>>()?;
    let pt = start.elapsed();

    let graph = |i: usize| &dataset.entries[i].graph;
    let mut modes = Vec::with_capacity(3);
    for mode in TrainingMode::ALL {
        let prototypes: Vec<(&AttributedGraph, usize)> = match mode {
            TrainingMode::SetMedian => medians
                .iter()
                .enumerate()
                .map(|(c, (sm, _))| (graph(*sm), c))
                .collect(),
            TrainingMode::GeneralizedMedian => medians
                .iter()
                .enumerate()
                .map(|(c, (_, gm))| (gm, c))
                .collect(),
            TrainingMode::TrainSet => train
                .iter()
                .map(|&i| (graph(i), dataset.entries[i].class))
                .collect(),
        };
        let start = Instant::now();
        let predictions = test
            .par_iter()
            .map(|&t| {
                let mut best: Option<(f64, usize)> = None;
                for (j, &(proto, class)) in prototypes.iter().enumerate() {
                    let solver = config.descent.phase2.with_seed(derive_seed(
                        config.seed,
                        &[CLASSIFY_STREAM, t as u64, j as u64],
                    ));
                    let d = compute_ged(&config.model, graph(t), proto, &solver)?.cost;
                    let closer = match best {
                        None => true,
                        Some((bd, bc)) => d < bd || (d == bd && class < bc),
                    };
                    if closer {
                        best = Some((d, class));
                    }
                }
                Ok(best.expect("at least one prototype").1)
            })
            .collect::<Result<Vec<_>>>()?;
        let time = start.elapsed();
        let correct = test
            .iter()
            .zip(&predictions)
            .filter(|&(&t, &p)| dataset.entries[t].class == p)
            .count();
        modes.push(ModeResult {
            mode,
            accuracy_pct: 100.0 * correct as f64 / test.len() as f64,
            time,
            distance_evals: test.len() * prototypes.len(),
            predictions,
        });
    }
    Ok(ClassifReport {
        modes,
        pt,
        train,
        test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ged::{GedMethod, GedSolverConfig};
    use crate::graph::Attribute;
    use crate::io::{DatasetEntry, EdgeMode, LabelDictionaries};
    use crate::synthetic::{distort, random_labeled_graph, Distortion};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dataset(classes: Vec<Vec<AttributedGraph>>) -> DatasetDescriptor {
        let class_names = (0..classes.len()).map(|c| format!("c{c}")).collect();
        let entries = classes
            .into_iter()
            .enumerate()
            .flat_map(|(class, gs)| {
                gs.into_iter()
                    .map(move |graph| DatasetEntry { graph, class })
            })
            .collect();
        DatasetDescriptor {
            name: "toy".into(),
            attribute_mode: Some(crate::graph::AttributeKind::Label),
            edge_mode: EdgeMode::Label,
            entries,
            class_names,
            dictionaries: LabelDictionaries::default(),
        }
    }

    fn shifted(g: &AttributedGraph, by: u32) -> AttributedGraph {
        let attrs = g
            .vertex_attrs()
            .iter()
            .map(|a| Attribute::Label(a.as_label().unwrap() + by))
            .collect();
        let edges = g
            .edges()
            .map(|(i, j, a)| (i, j, Attribute::Label(a.as_label().unwrap() + by)))
            .collect::<Vec<_>>();
        AttributedGraph::new(g.id(), attrs, edges).unwrap()
    }

    fn noisy_class(
        rng: &mut ChaCha8Rng,
        size: usize,
        order: usize,
        shift: u32,
    ) -> Vec<AttributedGraph> {
        let base = random_labeled_graph(rng, "base", order, 3, 2, 0.5);
        let noise = Distortion {
            vertex: 0.2,
            edge: 0.1,
            drop: 0.0,
            vertex_labels: 3,
            edge_labels: 2,
        };
        (0..size)
            .map(|i| shifted(&distort(rng, &base, format!("g{i}"), noise), shift))
            .collect()
    }

    fn config(method: GedMethod) -> ExperimentConfig {
        let solver = GedSolverConfig {
            method,
            multistart: 5,
            ..Default::default()
        };
        ExperimentConfig::new(
            CostModel::default_labeled(),
            DescentConfig::with_solvers(solver, solver),
        )
    }

    #[test]
    fn sample_sizes() {
        assert_eq!("50".parse::<SampleSize>().unwrap(), SampleSize::Count(50));
        assert_eq!(
            "0.3".parse::<SampleSize>().unwrap(),
            SampleSize::Fraction(0.3)
        );
        assert_eq!(SampleSize::Fraction(0.1).resolve(25), 3);
        assert!(SampleSize::Fraction(1.5).validate().is_err());
        assert!("x".parse::<SampleSize>().is_err());
    }

    #[test]
    fn identical_graphs_have_zero_sod() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_labeled_graph(&mut rng, "g", 5, 3, 2, 0.5);
        let ds = dataset(vec![vec![g; 6]]);
        let cfg = ExperimentConfig {
            sample: SampleSize::Count(4),
            repeats: 2,
            ..config(GedMethod::MultistartIpfp)
        };
        let report = run_sod_experiment(&ds, &cfg).unwrap();
        assert_eq!(report.rows.len(), 2);
        for r in &report.rows {
            assert_eq!((r.sod_sm, r.sod_gm), (0.0, 0.0));
        }
    }

    #[test]
    fn class_too_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ds = dataset(vec![noisy_class(&mut rng, 3, 4, 0)]);
        let cfg = ExperimentConfig {
            sample: SampleSize::Count(5),
            ..config(GedMethod::Bipartite)
        };
        assert!(matches!(
            run_sod_experiment(&ds, &cfg),
            Err(Error::ClassTooSmall {
                size: 3,
                sample: 5,
                ..
            })
        ));
    }

    #[test]
    fn sod_rows_never_increase_and_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ds = dataset(vec![
            noisy_class(&mut rng, 8, 6, 0),
            noisy_class(&mut rng, 8, 6, 3),
        ]);
        let cfg = ExperimentConfig {
            sample: SampleSize::Count(5),
            repeats: 3,
            seed: 17,
            ..config(GedMethod::MultistartIpfp)
        };
        let a = run_sod_experiment(&ds, &cfg).unwrap();
        assert_eq!(a.violations(), 0);
        let b = run_sod_experiment(&ds, &cfg).unwrap();
        assert_eq!(a.to_csv(false), b.to_csv(false));
        assert!(a
            .to_csv(false)
            .starts_with("class,repeat,sod_sm,t_sm,sod_gm,t_gm\n"));
    }

    #[test]
    fn disjoint_alphabets_classify_perfectly() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ds = dataset(vec![
            noisy_class(&mut rng, 10, 5, 0),
            noisy_class(&mut rng, 10, 5, 10),
        ]);
        let cfg = ExperimentConfig {
            sample: SampleSize::Fraction(0.3),
            ..config(GedMethod::MultistartIpfp)
        };
        let report = run_classification(&ds, &cfg).unwrap();
        assert_eq!((report.train.len(), report.test.len()), (6, 14));
        for m in &report.modes {
            assert_eq!(m.accuracy_pct, 100.0, "{:?}", m.mode);
        }
        assert_eq!(
            report.mode(TrainingMode::GeneralizedMedian).distance_evals,
            14 * 2
        );
        assert_eq!(report.mode(TrainingMode::TrainSet).distance_evals, 14 * 6);
        assert!(report
            .to_csv(false)
            .starts_with("mode,accuracy_pct,time_s,pt\nSM,100.0000,"));
    }

    #[test]
    fn degenerate_splits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let one = dataset(vec![noisy_class(&mut rng, 4, 3, 0)]);
        let cfg = ExperimentConfig {
            sample: SampleSize::Count(2),
            ..config(GedMethod::Bipartite)
        };
        assert!(matches!(
            run_classification(&one, &cfg),
            Err(Error::DegenerateSplit(_))
        ));
        let two = dataset(vec![
            noisy_class(&mut rng, 2, 3, 0),
            noisy_class(&mut rng, 4, 3, 5),
        ]);
        assert!(matches!(
            run_classification(&two, &cfg),
            Err(Error::DegenerateSplit(_))
        ));
    }
}
