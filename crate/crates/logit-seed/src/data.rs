//! Task data: the XOR Gaussian mixture, MNIST ingestion from IDX files, and
//! the copy-memory sequence task with its memoryless perplexity baseline.
//!
//! All generators are deterministic functions of their seed. The MNIST
//! loader maps pixels to `[-1, 1]` and mean-centers every feature on the
//! training split; the raw IDX tensors are also exposed (and writable) so
//! fixtures and round-trip checks need no external files.

use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::init::standard_normal;

/// A design matrix with integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledBatch {
    pub inputs: Array2<f64>,
    pub labels: Vec<usize>,
    pub classes: usize,
}

impl LabeledBatch {
    /// Bundle inputs and labels, checking that the row counts agree and
    /// every label is a valid class index.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] / [`Error::InvalidLabel`].
    pub fn new(inputs: Array2<f64>, labels: Vec<usize>, classes: usize) -> Result<Self> {
        if inputs.nrows() != labels.len() {
            return Err(Error::Shape {
                op: "LabeledBatch::new",
                msg: format!("{} input rows but {} labels", inputs.nrows(), labels.len()),
            });
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= classes) {
            return Err(Error::InvalidLabel { label, classes });
        }
        Ok(Self {
            inputs,
            labels,
            classes,
        })
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of input features.
    pub fn features(&self) -> usize {
        self.inputs.ncols()
    }

    /// Copy out the rows at the given indices (used for mini-batching).
    ///
    /// # Panics
    ///
    /// Panics if any index is out of range.
    pub fn select(&self, indices: &[usize]) -> Self {
        let inputs = Array2::from_shape_fn((indices.len(), self.features()), |(i, j)| {
            self.inputs[[indices[i], j]]
        });
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Self {
            inputs,
            labels,
            classes: self.classes,
        }
    }
}

/// Four isotropic 2-D Gaussians at `(+-1, +-1)` with std 0.35, labeled by the
/// XOR of the center signs: `(1,1)` and `(-1,-1)` are class 0, the mixed-sign
/// centers class 1. `n/4` samples per center, deterministic per seed.
///
/// # Errors
///
/// [`Error::Domain`] unless `n >= 4` and `n` is divisible by 4.
pub fn gen_xor(n: usize, seed: u64) -> Result<LabeledBatch> {
    if n < 4 || n % 4 != 0 {
        return Err(Error::Domain {
            op: "gen_xor",
            msg: format!("need n >= 4 divisible by 4, got {n}"),
        });
    }
    const STD: f64 = 0.35;
    let centers = [(1.0, 1.0, 0), (-1.0, -1.0, 0), (1.0, -1.0, 1), (-1.0, 1.0, 1)];
    let per_center = n / 4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Array2::zeros((n, 2));
    let mut labels = Vec::with_capacity(n);
    for (c, &(cx, cy, label)) in centers.iter().enumerate() {
        for i in 0..per_center {
            let row = c * per_center + i;
            inputs[[row, 0]] = cx + STD * standard_normal(&mut rng);
            inputs[[row, 1]] = cy + STD * standard_normal(&mut rng);
            labels.push(label);
        }
    }
    LabeledBatch::new(inputs, labels, 2)
}

const IMAGE_MAGIC: u32 = 2051;
const LABEL_MAGIC: u32 = 2049;

/// Raw contents of an IDX image file: `count` images of `rows x cols`
/// unsigned bytes, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxImages {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

/// Raw contents of an IDX label file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxLabels {
    pub labels: Vec<u8>,
}

fn open_all(path: &Path) -> Result<Vec<u8>> {
    let mut file = fs::File::open(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingData {
                path: path.to_path_buf(),
            }
        } else {
            Error::Io(e)
        }
    })?;
    let mut buf = Vec::new();
    file.read_to_end(&mut buf)?;
    Ok(buf)
}

fn be_u32(buf: &[u8], offset: usize, path: &Path) -> Result<u32> {
    let bytes: [u8; 4] = buf
        .get(offset..offset + 4)
        .and_then(|s| s.try_into().ok())
        .ok_or_else(|| Error::IdxTruncated {
            path: path.to_path_buf(),
            expected: offset + 4,
            found: buf.len(),
        })?;
    Ok(u32::from_be_bytes(bytes))
}

/// Parse a big-endian IDX image file (magic 2051).
///
/// # Errors
///
/// [`Error::MissingData`], [`Error::IdxMagic`], [`Error::IdxTruncated`].
pub fn read_idx_images(path: &Path) -> Result<IdxImages> {
    let buf = open_all(path)?;
    let magic = be_u32(&buf, 0, path)?;
    if magic != IMAGE_MAGIC {
        return Err(Error::IdxMagic {
            path: path.to_path_buf(),
            expected: IMAGE_MAGIC,
            found: magic,
        });
    }
    let count = be_u32(&buf, 4, path)? as usize;
    let rows = be_u32(&buf, 8, path)? as usize;
    let cols = be_u32(&buf, 12, path)? as usize;
    let expected = 16 + count * rows * cols;
    if buf.len() < expected {
        return Err(Error::IdxTruncated {
            path: path.to_path_buf(),
            expected,
            found: buf.len(),
        });
    }
    Ok(IdxImages {
        count,
        rows,
        cols,
        pixels: buf[16..expected].to_vec(),
    })
}

/// Parse a big-endian IDX label file (magic 2049).
///
/// # Errors
///
/// [`Error::MissingData`], [`Error::IdxMagic`], [`Error::IdxTruncated`].
pub fn read_idx_labels(path: &Path) -> Result<IdxLabels> {
    let buf = open_all(path)?;
    let magic = be_u32(&buf, 0, path)?;
    if magic != LABEL_MAGIC {
        return Err(Error::IdxMagic {
            path: path.to_path_buf(),
            expected: LABEL_MAGIC,
            found: magic,
        });
    }
    let count = be_u32(&buf, 4, path)? as usize;
    let expected = 8 + count;
    if buf.len() < expected {
        return Err(Error::IdxTruncated {
            path: path.to_path_buf(),
            expected,
            found: buf.len(),
        });
    }
    Ok(IdxLabels {
        labels: buf[8..expected].to_vec(),
    })
}

/// Serialize images back to IDX (inverse of [`read_idx_images`]).
///
/// # Errors
///
/// I/O errors from the filesystem.
pub fn write_idx_images(path: &Path, images: &IdxImages) -> Result<()> {
    let mut buf = Vec::with_capacity(16 + images.pixels.len());
    buf.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
    buf.extend_from_slice(&(images.count as u32).to_be_bytes());
    buf.extend_from_slice(&(images.rows as u32).to_be_bytes());
    buf.extend_from_slice(&(images.cols as u32).to_be_bytes());
    buf.extend_from_slice(&images.pixels);
    fs::write(path, buf)?;
    Ok(())
}

/// Serialize labels back to IDX (inverse of [`read_idx_labels`]).
///
/// # Errors
///
/// I/O errors from the filesystem.
pub fn write_idx_labels(path: &Path, labels: &IdxLabels) -> Result<()> {
    let mut buf = Vec::with_capacity(8 + labels.labels.len());
    buf.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    buf.extend_from_slice(&(labels.labels.len() as u32).to_be_bytes());
    buf.extend_from_slice(&labels.labels);
    fs::write(path, buf)?;
    Ok(())
}

/// The three MNIST splits after normalization.
#[derive(Debug, Clone)]
pub struct MnistSplits {
    pub train: LabeledBatch,
    pub validation: LabeledBatch,
    pub test: LabeledBatch,
}

/// File names of the standard MNIST distribution under a data directory.
pub const MNIST_FILES: [&str; 4] = [
    "train-images-idx3-ubyte",
    "train-labels-idx1-ubyte",
    "t10k-images-idx3-ubyte",
    "t10k-labels-idx1-ubyte",
];

fn batch_from_idx(images: &IdxImages, labels: &IdxLabels, path: &Path) -> Result<LabeledBatch> {
    if images.count != labels.labels.len() {
        return Err(Error::IdxTruncated {
            path: path.to_path_buf(),
            expected: images.count,
            found: labels.labels.len(),
        });
    }
    let features = images.rows * images.cols;
    let inputs = Array2::from_shape_fn((images.count, features), |(i, j)| {
        f64::from(images.pixels[i * features + j]) / 255.0 * 2.0 - 1.0
    });
    let labels = labels.labels.iter().map(|&l| l as usize).collect();
    LabeledBatch::new(inputs, labels, 10)
}

/// Load MNIST from a directory holding the four standard IDX files
/// ([`MNIST_FILES`]).
///
/// Pixels are mapped to `[-1, 1]`, a validation split is carved from the end
/// of the training set (the conventional last 10000 images; for smaller
/// fixture files, a sixth of the data), and every feature is mean-centered
/// using the remaining *training* rows only — the same shift is applied to
/// all three splits, so values land in `[-2, 2]`.
///
/// # Errors
///
/// [`Error::MissingData`], [`Error::IdxMagic`], [`Error::IdxTruncated`].
pub fn load_mnist(dir: &Path) -> Result<MnistSplits> {
    let paths: Vec<PathBuf> = MNIST_FILES.iter().map(|f| dir.join(f)).collect();
    let train_images = read_idx_images(&paths[0])?;
    let train_labels = read_idx_labels(&paths[1])?;
    let test_images = read_idx_images(&paths[2])?;
    let test_labels = read_idx_labels(&paths[3])?;

    let full_train = batch_from_idx(&train_images, &train_labels, &paths[0])?;
    let mut test = batch_from_idx(&test_images, &test_labels, &paths[2])?;

    let total = full_train.len();
    let val_count = if total > 10_000 {
        10_000
    } else {
        (total / 6).max(1)
    };
    if val_count >= total {
        return Err(Error::Shape {
            op: "load_mnist",
            msg: format!("{total} training images cannot spare a validation split"),
        });
    }
    let train_count = total - val_count;
    let features = full_train.features();

    let mut train = LabeledBatch {
        inputs: full_train
            .inputs
            .slice(ndarray::s![..train_count, ..])
            .to_owned(),
        labels: full_train.labels[..train_count].to_vec(),
        classes: 10,
    };
    let mut validation = LabeledBatch {
        inputs: full_train
            .inputs
            .slice(ndarray::s![train_count.., ..])
            .to_owned(),
        labels: full_train.labels[train_count..].to_vec(),
        classes: 10,
    };

    let mut means = Array1::<f64>::zeros(features);
    for row in train.inputs.rows() {
        means += &row;
    }
    means /= train_count as f64;
    train.inputs -= &means;
    validation.inputs -= &means;
    test.inputs -= &means;

    Ok(MnistSplits {
        train,
        validation,
        test,
    })
}

/// Shape of one copy-memory instance: a 3-symbol prefix from the 8-symbol
/// data alphabet, a `t_delay`-step gap, and a recall cue, over 10 symbols
/// total (`a8` = blank, `a9` = cue). Sequences are `t_delay + 6` long.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopyTaskSpec {
    t_delay: usize,
}

impl CopyTaskSpec {
    pub const ALPHABET: usize = 10;
    pub const MEMOR_LEN: usize = 3;
    /// Symbols the memorized prefix is drawn from (`a0..a7`).
    pub const DATA_SYMBOLS: usize = 8;
    pub const BLANK: usize = 8;
    pub const CUE: usize = 9;

    /// # Errors
    ///
    /// [`Error::Domain`] for a zero delay.
    pub fn new(t_delay: usize) -> Result<Self> {
        if t_delay == 0 {
            return Err(Error::Domain {
                op: "CopyTaskSpec::new",
                msg: "delay must be at least 1".into(),
            });
        }
        Ok(Self { t_delay })
    }

    pub fn t_delay(&self) -> usize {
        self.t_delay
    }

    /// Total sequence length `T + 6`.
    pub fn sequence_len(&self) -> usize {
        self.t_delay + 6
    }
}

/// A generated batch of copy-memory sequences, time-major: `inputs[t]` and
/// `targets[t]` are `(n x 10)` one-hot matrices; `target_labels[t]` holds
/// the same targets as class indices.
#[derive(Debug, Clone)]
pub struct CopyTaskData {
    pub inputs: Vec<Array2<f64>>,
    pub targets: Vec<Array2<f64>>,
    pub target_labels: Vec<Vec<usize>>,
}

/// Generate `n` copy-memory sequences.
///
/// Input layout (1-based positions): 1..3 hold the memorized symbols drawn
/// uniformly from `a0..a7`; 4..T+2 hold `T-1` blanks; position `T+3` is the
/// recall cue `a9`; `T+4..T+6` are blanks again. Targets are `T+3` blanks
/// followed by the memorized prefix.
///
/// # Errors
///
/// [`Error::Domain`] for `n = 0`.
pub fn gen_copy_task(spec: CopyTaskSpec, n: usize, seed: u64) -> Result<CopyTaskData> {
    if n == 0 {
        return Err(Error::Domain {
            op: "gen_copy_task",
            msg: "need at least one sequence".into(),
        });
    }
    let steps = spec.sequence_len();
    let t = spec.t_delay();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prefixes: Vec<[usize; CopyTaskSpec::MEMOR_LEN]> = (0..n)
        .map(|_| std::array::from_fn(|_| rng.gen_range(0..CopyTaskSpec::DATA_SYMBOLS)))
        .collect();

    let input_symbol = |pos: usize, sample: usize| -> usize {
        match pos {
            p if p < CopyTaskSpec::MEMOR_LEN => prefixes[sample][p],
            p if p == t + 2 => CopyTaskSpec::CUE, // 1-based position T+3
            _ => CopyTaskSpec::BLANK,
        }
    };
    let target_symbol = |pos: usize, sample: usize| -> usize {
        if pos < t + 3 {
            CopyTaskSpec::BLANK
        } else {
            prefixes[sample][pos - (t + 3)]
        }
    };

    let mut inputs = Vec::with_capacity(steps);
    let mut targets = Vec::with_capacity(steps);
    let mut target_labels = Vec::with_capacity(steps);
    for pos in 0..steps {
        let mut x = Array2::zeros((n, CopyTaskSpec::ALPHABET));
        let mut y = Array2::zeros((n, CopyTaskSpec::ALPHABET));
        let mut labels = Vec::with_capacity(n);
        for sample in 0..n {
            x[[sample, input_symbol(pos, sample)]] = 1.0;
            let target = target_symbol(pos, sample);
            y[[sample, target]] = 1.0;
            labels.push(target);
        }
        inputs.push(x);
        targets.push(y);
        target_labels.push(labels);
    }
    Ok(CopyTaskData {
        inputs,
        targets,
        target_labels,
    })
}

/// One-hot encode class labels as exact probability rows.
///
/// # Errors
///
/// [`Error::InvalidLabel`] for out-of-range labels.
pub fn one_hot(labels: &[usize], classes: usize) -> Result<Array2<f64>> {
    let mut out = Array2::zeros((labels.len(), classes));
    for (i, &label) in labels.iter().enumerate() {
        if label >= classes {
            return Err(Error::InvalidLabel { label, classes });
        }
        out[[i, label]] = 1.0;
    }
    Ok(out)
}

/// Perplexity of the strategy that knows the task structure but has no
/// memory: deterministic blanks up to the cue, a uniform guess over the 8
/// data symbols for the last 3 positions — `exp(3 ln 8 / (T + 6))`.
pub fn memoryless_perplexity(spec: CopyTaskSpec) -> f64 {
    let len = spec.sequence_len() as f64;
    (3.0 * (CopyTaskSpec::DATA_SYMBOLS as f64).ln() / len).exp()
}

/// `exp` of the mean per-symbol cross-entropy (nats) over every position of
/// every sequence. `predictions[t]` is a `(n x classes)` matrix of
/// probability rows; `targets[t]` the matching class indices. A
/// zero-probability target yields `+inf`.
///
/// # Errors
///
/// [`Error::Shape`] / [`Error::InvalidLabel`] for mismatched dimensions.
pub fn perplexity(predictions: &[Array2<f64>], targets: &[Vec<usize>]) -> Result<f64> {
    if predictions.len() != targets.len() || predictions.is_empty() {
        return Err(Error::Shape {
            op: "perplexity",
            msg: format!(
                "{} prediction steps vs {} target steps",
                predictions.len(),
                targets.len()
            ),
        });
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for (p, labels) in predictions.iter().zip(targets) {
        if p.nrows() != labels.len() {
            return Err(Error::Shape {
                op: "perplexity",
                msg: format!("{} rows vs {} labels in one step", p.nrows(), labels.len()),
            });
        }
        for (row, &label) in p.rows().into_iter().zip(labels) {
            if label >= row.len() {
                return Err(Error::InvalidLabel {
                    label,
                    classes: row.len(),
                });
            }
            total += -row[label].ln(); // ln(0) = -inf -> +inf sentinel
            count += 1;
        }
    }
    Ok((total / count as f64).exp())
}
