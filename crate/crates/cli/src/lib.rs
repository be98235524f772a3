//! Command-line front end for the `chaoswave` cipher. Everything here is
//! file plumbing around library calls.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use chaoswave::metrics::{write_histograms_csv, write_pairs_csv, Analysis};
use chaoswave::{keyfile, pgm, CipherBlob, GrayImage, SecretKey};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Encrypt,
    Decrypt,
    Analyze,
    Keygen,
    Preview,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    /// Plain PGM for encrypt/analyze/preview, cipher blob for decrypt.
    pub input: Option<PathBuf>,
    /// File for encrypt/decrypt/keygen/preview, directory for analyze.
    pub output: PathBuf,
    pub key: Option<PathBuf>,
    /// Existing cipher blob for analyze; encrypted on the fly when absent.
    pub cipher: Option<PathBuf>,
    pub seed: u64,
    pub pairs: usize,
    pub format: ReportFormat,
}

/// Failure classes, each with its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("input file not found: {}", .0.display())]
    InputMissing(PathBuf),
    #[error("key file not found: {}", .0.display())]
    KeyMissing(PathBuf),
    #[error("bad key file {}: {source}", .path.display())]
    Key { path: PathBuf, source: chaoswave::Error },
    #[error("cannot read {}: {source}", .path.display())]
    Format { path: PathBuf, source: chaoswave::Error },
    #[error("cipher failure: {0}")]
    Cipher(chaoswave::Error),
    #[error("cannot write {}: {source}", .path.display())]
    Output { path: PathBuf, source: chaoswave::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::InputMissing(_) => 3,
            CliError::KeyMissing(_) => 4,
            CliError::Key { .. } => 5,
            CliError::Format { .. } => 6,
            CliError::Cipher(_) => 7,
            CliError::Output { .. } => 8,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

impl CliConfig {
    /// Checks that every path the command needs is present before any work
    /// starts.
    pub fn validate(&self) -> CliResult<()> {
        let needs_input = self.command != Command::Keygen;
        let needs_key = matches!(self.command, Command::Encrypt | Command::Decrypt | Command::Preview)
            || (self.command == Command::Analyze && self.cipher.is_none());
        if needs_input {
            let input = self
                .input
                .as_ref()
                .ok_or_else(|| CliError::Usage("--in is required".into()))?;
            if !input.is_file() {
                return Err(CliError::InputMissing(input.clone()));
            }
        }
        if let Some(c) = &self.cipher {
            if !c.is_file() {
                return Err(CliError::InputMissing(c.clone()));
            }
        }
        match &self.key {
            Some(k) if !k.is_file() => return Err(CliError::KeyMissing(k.clone())),
            None if needs_key => return Err(CliError::Usage("a key is required (--key or CHAOSWAVE_KEY)".into())),
            _ => {}
        }
        if self.pairs < 2 {
            return Err(CliError::Usage("--pairs must be at least 2".into()));
        }
        Ok(())
    }
}

pub fn run(config: &CliConfig) -> CliResult<()> {
    config.validate()?;
    match config.command {
        Command::Encrypt => {
            let (image, key) = (load_image(input(config))?, load_key(config)?);
            let blob = chaoswave::encrypt(&image, &key).map_err(CliError::Cipher)?;
            write_file(&config.output, &blob.to_bytes())
        }
        Command::Decrypt => {
            let (blob, key) = (load_blob(input(config))?, load_key(config)?);
            // a wrong key is not an error: it yields a garbage image
            let image = chaoswave::decrypt(&blob, &key).map_err(CliError::Cipher)?;
            write_file(&config.output, &pgm::encode_pgm(&image))
        }
        Command::Preview => {
            let (image, key) = (load_image(input(config))?, load_key(config)?);
            let field = chaoswave::shuffled_preview(&image, &key).map_err(CliError::Cipher)?;
            write_file(&config.output, &pgm::encode_pgm(&field.to_image_normalized()))
        }
        Command::Keygen => {
            let key = fresh_key();
            write_file(&config.output, keyfile::format_key(&key).as_bytes())
        }
        Command::Analyze => analyze(config),
    }
}

fn analyze(config: &CliConfig) -> CliResult<()> {
    let path = input(config);
    let plain = load_image(path)?;
    let key = config.key.as_ref().map(|_| load_key(config)).transpose()?;
    let blob = match (&config.cipher, &key) {
        (Some(c), _) => load_blob(c)?,
        (None, Some(k)) => chaoswave::encrypt(&plain, k).map_err(CliError::Cipher)?,
        (None, None) => unreachable!("validate requires a key or a cipher"),
    };
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let analysis =
        Analysis::run(&name, &plain, &blob, key.as_ref(), config.pairs, config.seed).map_err(CliError::Cipher)?;

    let dir = &config.output;
    fs::create_dir_all(dir).map_err(|e| CliError::Output {
        path: dir.clone(),
        source: e.into(),
    })?;
    match config.format {
        ReportFormat::Json => {
            let json = analysis.to_json().map_err(CliError::Cipher)?;
            write_file(&dir.join("report.json"), json.as_bytes())?;
        }
        ReportFormat::Csv => with_writer(&dir.join("report.csv"), |w| analysis.write_csv(w))?,
    }
    let mut series = vec![
        ("plain", analysis.plain.histogram.as_slice()),
        ("cipher", &analysis.cipher.histogram),
    ];
    if let Some(w) = &analysis.key_sensitivity {
        series.push(("wrong_key", &w.histogram));
    }
    with_writer(&dir.join("histograms.csv"), |w| write_histograms_csv(w, &series))?;
    with_writer(&dir.join("pairs_plain.csv"), |w| {
        write_pairs_csv(w, &plain, config.pairs, config.seed)
    })?;
    let display = blob.display_plane();
    with_writer(&dir.join("pairs_cipher.csv"), |w| {
        write_pairs_csv(w, &display, config.pairs, config.seed)
    })
}

/// Default parameters with `x0` drawn from the thread RNG.
pub fn fresh_key() -> SecretKey {
    let mut rng = rand::rng();
    loop {
        let key = SecretKey::default().with_x0(rng.random_range(0.0..1.0));
        if key.validate().is_ok() && key.x0 != key.m {
            return key;
        }
    }
}

fn input(config: &CliConfig) -> &Path {
    config.input.as_deref().expect("validated")
}

fn load_image(path: &Path) -> CliResult<GrayImage> {
    pgm::read_pgm(path).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

fn load_blob(path: &Path) -> CliResult<CipherBlob> {
    let format = |source: chaoswave::Error| CliError::Format {
        path: path.to_path_buf(),
        source,
    };
    let bytes = fs::read(path).map_err(|e| format(e.into()))?;
    CipherBlob::from_bytes(&bytes).map_err(|e| format(e.into()))
}

fn load_key(config: &CliConfig) -> CliResult<SecretKey> {
    let path = config.key.as_ref().expect("validated");
    keyfile::read_key(path).map_err(|source| CliError::Key {
        path: path.clone(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::Output {
        path: path.to_path_buf(),
        source: e.into(),
    })
}

fn with_writer(path: &Path, f: impl FnOnce(BufWriter<fs::File>) -> chaoswave::Result<()>) -> CliResult<()> {
    let out = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(|e| out(e.into()))?;
    f(BufWriter::new(file)).map_err(out)
}
