//! Fixture tensor file format: an 8-integer little-endian header
//! `(magic, version, C, H, W, anchors, categories, reserved)` followed by
//! `C*H*W` little-endian f32 values. Lets decode be exercised from files
//! without any network runtime.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::decode::layer::FeatureMap;
use crate::error::{Error, Result};

pub const TENSOR_MAGIC: u32 = 0x5954_4E53;
pub const TENSOR_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorHeader {
    pub channels: u32,
    pub height: u32,
    pub width: u32,
    pub num_anchors: u32,
    pub num_categories: u32,
}

pub fn write_tensor_file(path: &Path, map: &FeatureMap, header: &TensorHeader) -> Result<()> {
    if header.channels as usize != map.channels
        || header.height as usize != map.height
        || header.width as usize != map.width
    {
        return Err(Error::TensorFormat("header dims disagree with data".into()));
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let words = [
        TENSOR_MAGIC,
        TENSOR_VERSION,
        header.channels,
        header.height,
        header.width,
        header.num_anchors,
        header.num_categories,
        0,
    ];
    for w in words {
        file.write_all(&w.to_le_bytes()).map_err(|e| Error::io(path, e))?;
    }
    for v in &map.data {
        file.write_all(&v.to_le_bytes()).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

pub fn read_tensor_file(path: &Path) -> Result<(FeatureMap, TensorHeader)> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;

    if bytes.len() < 32 {
        return Err(Error::TensorFormat("file shorter than header".into()));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i * 4..i * 4 + 4].try_into().unwrap());
    if word(0) != TENSOR_MAGIC {
        return Err(Error::TensorFormat(format!(
            "bad magic {:#010x}, expected {:#010x}",
            word(0),
            TENSOR_MAGIC
        )));
    }
    if word(1) != TENSOR_VERSION {
        return Err(Error::TensorFormat(format!("unsupported version {}", word(1))));
    }
    let header = TensorHeader {
        channels: word(2),
        height: word(3),
        width: word(4),
        num_anchors: word(5),
        num_categories: word(6),
    };

    let count = header.channels as usize * header.height as usize * header.width as usize;
    let expected_len = 32 + count * 4;
    if bytes.len() != expected_len {
        return Err(Error::TensorFormat(format!(
            "expected {expected_len} bytes, found {}",
            bytes.len()
        )));
    }
    let data: Vec<f32> = bytes[32..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let map = FeatureMap::from_data(
        header.channels as usize,
        header.height as usize,
        header.width as usize,
        data,
    )?;
    Ok((map, header))
}
