use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aerodet::annot::{
    dataset_stats, load_dataset, mosaic_compose, render_label_line, to_yolo_label,
    CategoryTaxonomy, LoadOptions, SourceSample,
};
use aerodet::cfg::{
    iterations_per_epoch, lr_at, parse_cfg, render_cfg, set_net_resolution, transfer_plan,
    TrainSchedule,
};
use aerodet::decode::{decode_layer, nms_greedy, read_tensor_file, YoloLayerSpec};
use aerodet::error::{Error, Result};
use aerodet::eval::{
    evaluate, read_detection_dir, EvalConfig, Interpolation, TruncationPolicy,
};
use aerodet::harness::{
    measure_fps, parse_series_csv, run_echo_backend, run_sweep, select_checkpoint, BackendSpec,
    EchoOptions, SweepOptions, TimingSample,
};

#[derive(Parser)]
#[command(name = "aerodet", version, about = "Aerial object detection evaluation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DimsArgs {
    /// CSV sidecar `image_id,width,height` overriding image headers
    #[arg(long)]
    dims_file: Option<PathBuf>,
    /// Directory of image files matched by annotation stem
    #[arg(long = "img")]
    image_dir: Option<PathBuf>,
}

impl DimsArgs {
    fn load_options(&self) -> LoadOptions {
        LoadOptions {
            image_dir: self.image_dir.clone(),
            dims_file: self.dims_file.clone(),
            ..LoadOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-category instance counts and size histogram
    Stats {
        ann_dir: PathBuf,
        #[command(flatten)]
        dims: DimsArgs,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Export normalized training labels
    Convert {
        ann_dir: PathBuf,
        out_dir: PathBuf,
        #[command(flatten)]
        dims: DimsArgs,
        /// Export the "others" class as an eleventh label index
        #[arg(long)]
        keep_others: bool,
    },
    /// Compose mosaic-augmented samples from an image list
    Mosaic {
        /// Text file listing source image paths, one per line
        list_file: PathBuf,
        out_dir: PathBuf,
        /// Canvas dims, e.g. 1280x1280
        #[arg(long)]
        canvas: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed split point `X,Y`; random when omitted
        #[arg(long)]
        split: Option<String>,
        #[arg(long, default_value_t = 0.25)]
        min_visibility: f64,
    },
    /// Decode a raw head tensor file into detections CSV
    Decode {
        tensor_file: PathBuf,
        /// Layer spec JSON (grid dims, stride, anchors, categories)
        #[arg(long = "spec")]
        spec_file: PathBuf,
        #[arg(long = "conf", default_value_t = 0.005)]
        conf_threshold: f64,
        /// NMS IoU threshold; pass 1.0 to disable suppression
        #[arg(long = "nms", default_value_t = 0.45)]
        nms_threshold: f64,
        #[arg(long, default_value_t = true)]
        class_aware: bool,
    },
    /// Evaluate detections against ground truth
    Eval {
        #[arg(long = "ann")]
        ann_dir: PathBuf,
        #[arg(long = "det")]
        det_dir: PathBuf,
        #[command(flatten)]
        dims: DimsArgs,
        /// exclude50 drops GTs with a >50% truncation bucket
        #[arg(long = "trunc-policy", default_value = "include")]
        trunc_policy: String,
        /// 101 (COCO-style) or all (exact envelope area)
        #[arg(long = "interp", default_value = "101")]
        interp: String,
        /// Write PR curves JSON here
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long, default_value = "yolov4")]
        method: String,
        /// Write the full JSON report here; the table CSV goes to stdout
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Darknet config tools
    Cfg {
        #[command(subcommand)]
        command: CfgCommand,
    },
    /// Resolution sweep with latency measurement
    Sweep {
        /// Comma-separated square resolutions, multiples of 32
        #[arg(long)]
        resolutions: String,
        #[arg(long = "ann")]
        ann_dir: PathBuf,
        #[command(flatten)]
        dims: DimsArgs,
        /// Backend launch template containing the {res} placeholder
        #[arg(long = "backend-cmd")]
        backend_cmd: String,
        #[arg(long, default_value_t = 5)]
        warmup: usize,
        #[arg(long, default_value_t = 10_000)]
        handshake_timeout_ms: u64,
        #[arg(long, default_value_t = 10_000)]
        image_timeout_ms: u64,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the timing-free metrics CSV here
        #[arg(long)]
        metrics_output: Option<PathBuf>,
    },
    /// Pick the best checkpoint from an iteration,ap,f1 series
    Select {
        #[arg(long)]
        series: PathBuf,
    },
    /// Summarize latency samples into mean/median/FPS
    BenchFps {
        #[arg(long)]
        samples: PathBuf,
    },
    /// Synthetic gt-echo backend speaking the sweep wire protocol
    BackendEcho {
        #[arg(long = "ann")]
        ann_dir: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        score_noise: f64,
        #[arg(long, default_value_t = 0.0)]
        drop_rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        delay_ms: u64,
        /// Accepted for template compatibility; the echo backend ignores it
        #[arg(long, default_value_t = 416)]
        resolution: u32,
    },
}

#[derive(Subcommand)]
enum CfgCommand {
    /// Set the network resolution (multiples of 32)
    SetResolution {
        file: PathBuf,
        /// e.g. 1120x1120
        resolution: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the burn-in learning-rate table
    Schedule {
        file: PathBuf,
        #[arg(long = "iters")]
        iterations: u64,
        /// Dataset size for the iterations-per-epoch line
        #[arg(long)]
        num_images: Option<u64>,
    },
    /// Report which layers load pre-trained weights at a cut
    TransferPlan {
        file: PathBuf,
        #[arg(long)]
        cut: usize,
    },
}

fn parse_dims_pair(text: &str, separator: char) -> Result<(u32, u32)> {
    let parts: Vec<&str> = text.split(separator).collect();
    if parts.len() != 2 {
        return Err(Error::Invalid(format!(
            "expected W{separator}H, found {text:?}"
        )));
    }
    let w = parts[0].trim().parse().map_err(|_| Error::Invalid(format!("bad dim {:?}", parts[0])))?;
    let h = parts[1].trim().parse().map_err(|_| Error::Invalid(format!("bad dim {:?}", parts[1])))?;
    Ok((w, h))
}

fn run_stats(ann_dir: &Path, dims: &DimsArgs, json: bool, csv: bool) -> Result<()> {
    let index = load_dataset(ann_dir, &dims.load_options())?;
    let taxonomy = CategoryTaxonomy::default();
    let stats = dataset_stats(&index, &taxonomy);
    if json {
        println!("{}", serde_json::to_string_pretty(&stats)?);
    } else if csv {
        println!("category,count");
        for (name, count) in &stats.category_counts {
            println!("{name},{count}");
        }
    } else {
        println!("images: {}", stats.num_images);
        println!("evaluable objects: {}", stats.total_evaluable);
        for (name, count) in &stats.category_counts {
            println!("  {name:16} {count}");
        }
        println!(
            "size histogram (tiny/small/medium/large): {}/{}/{}/{}",
            stats.size_histogram[0],
            stats.size_histogram[1],
            stats.size_histogram[2],
            stats.size_histogram[3]
        );
    }
    for (id, reason) in &index.skipped {
        eprintln!("skipped {id}: {reason}");
    }
    Ok(())
}

fn run_convert(ann_dir: &Path, out_dir: &Path, dims: &DimsArgs, keep_others: bool) -> Result<()> {
    let options = dims.load_options();
    let index = load_dataset(ann_dir, &options)?;
    let taxonomy = if keep_others {
        CategoryTaxonomy::with_others_kept()
    } else {
        CategoryTaxonomy::default()
    };
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut converted = 0usize;
    for entry in &index.images {
        let image_dims = match entry.dims {
            Some(d) => d,
            None => {
                eprintln!("skipped {}: image dims unknown", entry.image_id);
                continue;
            }
        };
        let mut lines = Vec::new();
        for record in &entry.annotations {
            if let Some(label) =
                to_yolo_label(record, image_dims, &taxonomy, options.bounds_slack)?
            {
                lines.push(render_label_line(&label));
            }
        }
        let out_path = out_dir.join(format!("{}.txt", entry.image_id));
        let mut content = lines.join("\n");
        if !content.is_empty() {
            content.push('\n');
        }
        fs::write(&out_path, content).map_err(|e| Error::io(&out_path, e))?;
        converted += 1;
    }
    eprintln!("wrote {converted} label files to {}", out_dir.display());
    Ok(())
}

fn annotation_path_for(image_path: &Path) -> PathBuf {
    // VisDrone layout: .../images/x.jpg with .../annotations/x.txt;
    // fall back to a sibling .txt file.
    let from_layout = image_path.parent().and_then(|dir| {
        if dir.file_name()? == "images" {
            let stem = image_path.file_stem()?;
            Some(
                dir.parent()?
                    .join("annotations")
                    .join(format!("{}.txt", stem.to_string_lossy())),
            )
        } else {
            None
        }
    });
    match from_layout {
        Some(p) if p.is_file() => p,
        _ => image_path.with_extension("txt"),
    }
}

fn run_mosaic(
    list_file: &Path,
    out_dir: &Path,
    canvas: (u32, u32),
    seed: u64,
    split: Option<(u32, u32)>,
    min_visibility: f64,
) -> Result<()> {
    let text = fs::read_to_string(list_file).map_err(|e| Error::io(list_file, e))?;
    let paths: Vec<PathBuf> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(PathBuf::from)
        .collect();
    if paths.len() < 4 {
        return Err(Error::Invalid(format!(
            "mosaic needs at least 4 images, list has {}",
            paths.len()
        )));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..paths.len()).collect();
    // Fisher-Yates with the seeded stream keeps group picks reproducible.
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }

    let mut produced = 0usize;
    for (group_idx, group) in order.chunks_exact(4).enumerate() {
        let mut sources = Vec::with_capacity(4);
        let mut images = Vec::with_capacity(4);
        let mut ok = true;
        for &i in group {
            let img = match image::open(&paths[i]) {
                Ok(img) => img.to_rgb8(),
                Err(e) => {
                    eprintln!("skipped group {group_idx}: {}: {e}", paths[i].display());
                    ok = false;
                    break;
                }
            };
            let ann_path = annotation_path_for(&paths[i]);
            let mut boxes = Vec::new();
            if let Ok(ann_text) = fs::read_to_string(&ann_path) {
                for (ln, line) in ann_text.lines().enumerate() {
                    if line.trim().is_empty() {
                        continue;
                    }
                    let record = aerodet::annot::parse_annotation_line(line, ln + 1)?;
                    if record.score_flag == 1 && record.width > 0 && record.height > 0 {
                        boxes.push((record.category_id, record.pixel_box()));
                    }
                }
            }
            sources.push(SourceSample {
                image_ref: paths[i].display().to_string(),
                dims: img.dimensions(),
                boxes,
            });
            images.push(img);
        }
        if !ok {
            continue;
        }

        let split_point = split.unwrap_or_else(|| {
            // darknet-style jitter: split within the central half
            let x = rng.gen_range(canvas.0 / 4..=3 * canvas.0 / 4);
            let y = rng.gen_range(canvas.1 / 4..=3 * canvas.1 / 4);
            (x.max(1).min(canvas.0 - 1), y.max(1).min(canvas.1 - 1))
        });

        let sources: [SourceSample; 4] = sources.try_into().expect("4 sources");
        let sample = mosaic_compose(&sources, canvas, split_point, min_visibility)?;

        // nearest-neighbor composition
        let mut out_img = image::RgbImage::new(canvas.0, canvas.1);
        for (tile, src) in sample.tiles.iter().zip(images.iter()) {
            let (sw, sh) = src.dimensions();
            for dy in 0..tile.dest.height as u32 {
                for dx in 0..tile.dest.width as u32 {
                    let sx = ((dx as f64 / tile.scale).floor() as u32).min(sw - 1);
                    let sy = ((dy as f64 / tile.scale).floor() as u32).min(sh - 1);
                    out_img.put_pixel(
                        tile.dest.left as u32 + dx,
                        tile.dest.top as u32 + dy,
                        *src.get_pixel(sx, sy),
                    );
                }
            }
        }

        let base = out_dir.join(format!("mosaic_{group_idx:04}"));
        out_img
            .save(base.with_extension("png"))
            .map_err(|e| Error::Invalid(format!("write mosaic image: {e}")))?;

        let mut label_lines = String::new();
        for (category, b) in &sample.remapped_boxes {
            label_lines.push_str(&format!(
                "{},{},{},{},1,{},0,0\n",
                b.left.round() as i64,
                b.top.round() as i64,
                b.width.round() as i64,
                b.height.round() as i64,
                category
            ));
        }
        fs::write(base.with_extension("txt"), label_lines)
            .map_err(|e| Error::io(base.with_extension("txt"), e))?;

        let meta = serde_json::json!({
            "canvas": { "width": canvas.0, "height": canvas.1 },
            "split": { "x": split_point.0, "y": split_point.1 },
            "tiles": sample.tiles.iter().map(|t| serde_json::json!({
                "source": t.image_ref,
                "scale": t.scale,
                "src_crop": t.src_crop,
                "dest": t.dest,
            })).collect::<Vec<_>>(),
            "num_boxes": sample.remapped_boxes.len(),
        });
        fs::write(
            base.with_extension("json"),
            serde_json::to_string_pretty(&meta)?,
        )
        .map_err(|e| Error::io(base.with_extension("json"), e))?;
        produced += 1;
    }
    eprintln!("wrote {produced} mosaics to {}", out_dir.display());
    Ok(())
}

fn run_decode(
    tensor_file: &Path,
    spec_file: &Path,
    conf_threshold: f64,
    nms_threshold: f64,
    class_aware: bool,
) -> Result<()> {
    let spec_text = fs::read_to_string(spec_file).map_err(|e| Error::io(spec_file, e))?;
    let spec: YoloLayerSpec = serde_json::from_str(&spec_text)?;
    let (map, _header) = read_tensor_file(tensor_file)?;
    let detections = decode_layer(&map, &spec, conf_threshold)?;
    let kept = if nms_threshold < 1.0 {
        nms_greedy(&detections, nms_threshold, class_aware)
    } else {
        detections
    };
    println!("left,top,width,height,score,category");
    for d in kept {
        println!(
            "{:.2},{:.2},{:.2},{:.2},{:.6},{}",
            d.bbox.left, d.bbox.top, d.bbox.width, d.bbox.height, d.score, d.category_index
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_eval(
    ann_dir: &Path,
    det_dir: &Path,
    dims: &DimsArgs,
    trunc_policy: &str,
    interp: &str,
    curves: Option<&Path>,
    method: &str,
    json_out: Option<&Path>,
) -> Result<()> {
    let index = load_dataset(ann_dir, &dims.load_options())?;
    let detections = read_detection_dir(det_dir)?;
    let taxonomy = CategoryTaxonomy::default();

    let mut config = EvalConfig::default();
    config.truncation_policy = match trunc_policy {
        "include" => TruncationPolicy::Include,
        "exclude50" => TruncationPolicy::ExcludeGtOver50,
        other => {
            return Err(Error::Invalid(format!(
                "unknown truncation policy {other:?} (include|exclude50)"
            )))
        }
    };
    config.ap_interpolation = match interp {
        "101" => Interpolation::Pt101,
        "all" => Interpolation::AllPoint,
        other => {
            return Err(Error::Invalid(format!(
                "unknown interpolation {other:?} (101|all)"
            )))
        }
    };

    let report = evaluate(&index, &detections, &taxonomy, &config, curves.is_some());
    print!("{}", report.to_table_csv(method));

    if let Some(path) = curves {
        let payload = serde_json::json!({
            "pr_curves": report.pr_curves,
            "f1_curve": report.f1_curve,
        });
        fs::write(path, serde_json::to_string_pretty(&payload)?)
            .map_err(|e| Error::io(path, e))?;
    }
    if let Some(path) = json_out {
        fs::write(path, report.to_json()?).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn run_cfg(command: &CfgCommand) -> Result<()> {
    match command {
        CfgCommand::SetResolution {
            file,
            resolution,
            output,
        } => {
            let (w, h) = parse_dims_pair(resolution, 'x')?;
            let text = fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
            let mut doc = parse_cfg(&text)?;
            set_net_resolution(&mut doc, w, h)?;
            let rendered = render_cfg(&doc);
            let target = output.as_deref().unwrap_or(file);
            fs::write(target, rendered).map_err(|e| Error::io(target, e))?;
            eprintln!("set {}x{} in {}", w, h, target.display());
        }
        CfgCommand::Schedule {
            file,
            iterations,
            num_images,
        } => {
            let text = fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
            let doc = parse_cfg(&text)?;
            let schedule = TrainSchedule::from_doc(&doc)?;
            if let Some(n) = num_images {
                println!(
                    "iterations per epoch ({} images, batch {}): {}",
                    n,
                    schedule.batch,
                    iterations_per_epoch(*n, schedule.batch)
                );
            }
            println!("iteration,lr");
            let step = (*iterations / 20).max(1);
            let mut it = 0;
            while it <= *iterations {
                println!("{},{:e}", it, lr_at(it, &schedule));
                it += step;
            }
        }
        CfgCommand::TransferPlan { file, cut } => {
            let text = fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
            let doc = parse_cfg(&text)?;
            let plan = transfer_plan(&doc, *cut)?;
            println!(
                "convolutional layers: {} load pre-trained, {} freshly initialized",
                plan.load_count, plan.init_count
            );
            match plan.cut_section_index {
                Some(i) => println!("cut falls at layer-section index {i}"),
                None => println!("cut beyond the last convolutional layer: everything loads"),
            }
            println!(
                "total layer records of any type: {}",
                plan.total_layer_sections
            );
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_sweep_cmd(
    resolutions: &str,
    ann_dir: &Path,
    dims: &DimsArgs,
    backend_cmd: &str,
    warmup: usize,
    handshake_timeout_ms: u64,
    image_timeout_ms: u64,
    output: &Path,
    metrics_output: Option<&Path>,
) -> Result<()> {
    let resolutions: Vec<u32> = resolutions
        .split(',')
        .map(|r| {
            r.trim()
                .parse::<u32>()
                .map_err(|_| Error::Invalid(format!("bad resolution {r:?}")))
        })
        .collect::<Result<_>>()?;

    let index = load_dataset(ann_dir, &dims.load_options())?;
    let spec = BackendSpec {
        command_template: backend_cmd.to_string(),
        handshake_timeout_ms,
        per_image_timeout_ms: image_timeout_ms,
        ..Default::default()
    };
    let report = run_sweep(
        &resolutions,
        &index,
        &spec,
        &CategoryTaxonomy::default(),
        &EvalConfig::default(),
        &SweepOptions { warmup },
    )?;
    fs::write(output, report.to_csv()).map_err(|e| Error::io(output, e))?;
    if let Some(path) = metrics_output {
        fs::write(path, report.to_metrics_csv()).map_err(|e| Error::io(path, e))?;
    }
    eprintln!("wrote {}", output.display());
    Ok(())
}

fn run_bench_fps(samples_path: &Path) -> Result<()> {
    let text = fs::read_to_string(samples_path).map_err(|e| Error::io(samples_path, e))?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if i == 0 && parts.get(1).map(|p| p.trim().parse::<f64>().is_err()).unwrap_or(true) {
            continue; // header
        }
        if parts.len() < 2 {
            return Err(Error::Parse {
                path: samples_path.display().to_string(),
                line: i + 1,
                msg: "expected image_id,latency_ms[,resolution]".into(),
            });
        }
        samples.push(TimingSample {
            image_id: parts[0].trim().to_string(),
            latency_ms: parts[1].trim().parse().map_err(|_| Error::Parse {
                path: samples_path.display().to_string(),
                line: i + 1,
                msg: format!("bad latency {:?}", parts[1]),
            })?,
            resolution: parts
                .get(2)
                .and_then(|p| p.trim().parse().ok())
                .unwrap_or(0),
        });
    }
    if samples.is_empty() {
        return Err(Error::Invalid("no samples".into()));
    }
    let summary = measure_fps(&samples);
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Stats {
            ann_dir,
            dims,
            json,
            csv,
        } => run_stats(ann_dir, dims, *json, *csv),
        Command::Convert {
            ann_dir,
            out_dir,
            dims,
            keep_others,
        } => run_convert(ann_dir, out_dir, dims, *keep_others),
        Command::Mosaic {
            list_file,
            out_dir,
            canvas,
            seed,
            split,
            min_visibility,
        } => {
            let canvas = parse_dims_pair(canvas, 'x')?;
            let split = split
                .as_deref()
                .map(|s| parse_dims_pair(s, ','))
                .transpose()?;
            run_mosaic(list_file, out_dir, canvas, *seed, split, *min_visibility)
        }
        Command::Decode {
            tensor_file,
            spec_file,
            conf_threshold,
            nms_threshold,
            class_aware,
        } => run_decode(
            tensor_file,
            spec_file,
            *conf_threshold,
            *nms_threshold,
            *class_aware,
        ),
        Command::Eval {
            ann_dir,
            det_dir,
            dims,
            trunc_policy,
            interp,
            curves,
            method,
            json,
        } => run_eval(
            ann_dir,
            det_dir,
            dims,
            trunc_policy,
            interp,
            curves.as_deref(),
            method,
            json.as_deref(),
        ),
        Command::Cfg { command } => run_cfg(command),
        Command::Sweep {
            resolutions,
            ann_dir,
            dims,
            backend_cmd,
            warmup,
            handshake_timeout_ms,
            image_timeout_ms,
            output,
            metrics_output,
        } => run_sweep_cmd(
            resolutions,
            ann_dir,
            dims,
            backend_cmd,
            *warmup,
            *handshake_timeout_ms,
            *image_timeout_ms,
            output,
            metrics_output.as_deref(),
        ),
        Command::Select { series } => {
            let points = parse_series_csv(series)?;
            println!("{}", select_checkpoint(&points)?);
            Ok(())
        }
        Command::BenchFps { samples } => run_bench_fps(samples),
        Command::BackendEcho {
            ann_dir,
            score_noise,
            drop_rate,
            seed,
            delay_ms,
            resolution: _,
        } => run_echo_backend(&EchoOptions {
            annotation_dir: ann_dir.clone(),
            score_noise: *score_noise,
            drop_rate: *drop_rate,
            seed: *seed,
            delay_ms: *delay_ms,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
