use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::annot::{parse_annotation_line, CategoryTaxonomy};
use crate::error::{Error, Result};
use crate::eval::EvalDetection;
use crate::geometry::PixelBox;

/// How to launch and talk to an external detector process.
#[derive(Debug, Clone)]
pub struct BackendSpec {
    /// Shell command template; must contain the resolution placeholder.
    pub command_template: String,
    /// Token replaced by the square network resolution in pixels.
    pub resolution_placeholder: String,
    pub handshake_timeout_ms: u64,
    pub per_image_timeout_ms: u64,
}

impl Default for BackendSpec {
    fn default() -> Self {
        BackendSpec {
            command_template: String::new(),
            resolution_placeholder: "{res}".into(),
            handshake_timeout_ms: 10_000,
            per_image_timeout_ms: 10_000,
        }
    }
}

impl BackendSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.command_template.contains(&self.resolution_placeholder) {
            return Err(Error::Backend(format!(
                "command template lacks the {} resolution placeholder",
                self.resolution_placeholder
            )));
        }
        Ok(())
    }

    pub fn command_for(&self, resolution: u32) -> String {
        self.command_template
            .replace(&self.resolution_placeholder, &resolution.to_string())
    }
}

/// One inference request. Field names are part of the wire contract.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackendRequest {
    pub id: String,
    pub image: String,
    pub width: u32,
    pub height: u32,
    pub net_w: u32,
    pub net_h: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WireDetection {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
    pub score: f64,
    pub category: u8,
}

impl From<WireDetection> for EvalDetection {
    fn from(w: WireDetection) -> Self {
        EvalDetection {
            bbox: PixelBox::new(w.left, w.top, w.width, w.height),
            score: w.score,
            category_id: w.category,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackendResponse {
    pub id: String,
    /// Backend-reported inference time, stored as auxiliary data; the
    /// harness wall clock is authoritative.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub latency_ms: Option<f64>,
    pub detections: Vec<WireDetection>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReadyLine {
    ready: bool,
}

/// A running backend child process. The child is killed and reaped on
/// drop, covering every harness exit path.
pub struct BackendProcess {
    child: Child,
    stdin: std::process::ChildStdin,
    lines: mpsc::Receiver<std::io::Result<String>>,
}

impl BackendProcess {
    /// Launch the backend for one resolution and wait for its ready line.
    pub fn launch(spec: &BackendSpec, resolution: u32) -> Result<BackendProcess> {
        spec.validate()?;
        let command = spec.command_for(resolution);
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Backend(format!("spawn {command:?}: {e}")))?;

        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });

        let mut process = BackendProcess {
            child,
            stdin,
            lines: rx,
        };
        process.wait_ready(Duration::from_millis(spec.handshake_timeout_ms))?;
        Ok(process)
    }

    fn wait_ready(&mut self, timeout: Duration) -> Result<()> {
        let deadline = Instant::now() + timeout;
        loop {
            let remaining = deadline
                .checked_duration_since(Instant::now())
                .ok_or_else(|| Error::Backend("handshake timed out".into()))?;
            let line = self
                .lines
                .recv_timeout(remaining)
                .map_err(|_| Error::Backend("handshake timed out".into()))?
                .map_err(|e| Error::Backend(format!("read error during handshake: {e}")))?;
            if let Ok(ready) = serde_json::from_str::<ReadyLine>(&line) {
                if ready.ready {
                    return Ok(());
                }
            }
        }
    }

    /// Send one request and wait for its response. Returns the response
    /// and the request/response wall-clock span.
    pub fn infer(
        &mut self,
        request: &BackendRequest,
        timeout: Duration,
    ) -> Result<(BackendResponse, Duration)> {
        let line = serde_json::to_string(request)?;
        let started = Instant::now();
        writeln!(self.stdin, "{line}")
            .and_then(|_| self.stdin.flush())
            .map_err(|e| Error::Backend(format!("write request: {e}")))?;

        let deadline = started + timeout;
        loop {
            let remaining = deadline
                .checked_duration_since(Instant::now())
                .ok_or_else(|| Error::Backend(format!("image {} timed out", request.id)))?;
            let line = self
                .lines
                .recv_timeout(remaining)
                .map_err(|_| Error::Backend(format!("image {} timed out", request.id)))?
                .map_err(|e| Error::Backend(format!("read response: {e}")))?;
            let elapsed = started.elapsed();
            match serde_json::from_str::<BackendResponse>(&line) {
                Ok(resp) if resp.id == request.id => return Ok((resp, elapsed)),
                Ok(_) => continue,  // stale response from a skipped image
                Err(_) => continue, // non-protocol chatter
            }
        }
    }
}

impl Drop for BackendProcess {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Options for the built-in synthetic backend that echoes ground truth.
#[derive(Debug, Clone)]
pub struct EchoOptions {
    pub annotation_dir: PathBuf,
    /// Scores are drawn from [1 - noise, 1].
    pub score_noise: f64,
    /// Probability of dropping each ground-truth box.
    pub drop_rate: f64,
    pub seed: u64,
    /// Fixed artificial delay per image, for latency testing.
    pub delay_ms: u64,
}

fn echo_detections(
    ann_path: &Path,
    taxonomy: &CategoryTaxonomy,
    rng: &mut ChaCha8Rng,
    options: &EchoOptions,
) -> Vec<WireDetection> {
    let text = match std::fs::read_to_string(ann_path) {
        Ok(t) => t,
        Err(_) => return Vec::new(),
    };
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = match parse_annotation_line(line, i + 1) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if record.score_flag == 0 || !taxonomy.is_evaluable(record.category_id) {
            continue;
        }
        if options.drop_rate > 0.0 && rng.gen::<f64>() < options.drop_rate {
            continue;
        }
        let score = if options.score_noise > 0.0 {
            1.0 - rng.gen::<f64>() * options.score_noise
        } else {
            1.0
        };
        out.push(WireDetection {
            left: record.left as f64,
            top: record.top as f64,
            width: record.width as f64,
            height: record.height as f64,
            score,
            category: record.category_id,
        });
    }
    out
}

/// Serve the gt-echo protocol on stdin/stdout until EOF. Each request is
/// answered with the image's evaluable ground truth as detections.
pub fn run_echo_backend(options: &EchoOptions) -> Result<()> {
    let taxonomy = CategoryTaxonomy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{}", serde_json::to_string(&ReadyLine { ready: true })?)
        .map_err(|e| Error::Backend(format!("write ready: {e}")))?;
    out.flush().ok();

    let stdin = std::io::stdin();
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| Error::Backend(format!("read request: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let request: BackendRequest = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if options.delay_ms > 0 {
            std::thread::sleep(Duration::from_millis(options.delay_ms));
        }
        let stem = Path::new(&request.image)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or(&request.id);
        let ann_path = options.annotation_dir.join(format!("{stem}.txt"));
        let detections = echo_detections(&ann_path, &taxonomy, &mut rng, options);
        let response = BackendResponse {
            id: request.id,
            latency_ms: None,
            detections,
        };
        writeln!(out, "{}", serde_json::to_string(&response)?)
            .map_err(|e| Error::Backend(format!("write response: {e}")))?;
        out.flush().ok();
    }
    Ok(())
}
