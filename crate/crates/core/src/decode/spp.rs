use crate::decode::layer::FeatureMap;
use crate::error::{Error, Result};

/// Spatial-size-preserving SPP: for each kernel, a stride-1 max pool with
/// symmetric `(k-1)/2` padding filled with -inf, concatenated along
/// channels after the original input. The darknet default kernel set is
/// `{5, 9, 13}`.
pub fn spp_pool(input: &FeatureMap, kernel_sizes: &[usize]) -> Result<FeatureMap> {
    for &k in kernel_sizes {
        if k % 2 == 0 {
            return Err(Error::Invalid(format!("SPP kernel {k} must be odd")));
        }
        if k > input.width || k > input.height {
            return Err(Error::Invalid(format!(
                "SPP kernel {k} exceeds {}x{} spatial dims",
                input.width, input.height
            )));
        }
    }

    let mut out = FeatureMap::new(
        input.channels * (1 + kernel_sizes.len()),
        input.height,
        input.width,
    );
    out.data[..input.data.len()].copy_from_slice(&input.data);

    let mut channel_offset = input.channels;
    for &k in kernel_sizes {
        let half = (k as isize - 1) / 2;
        for c in 0..input.channels {
            for y in 0..input.height {
                for x in 0..input.width {
                    let mut best = f32::NEG_INFINITY;
                    for dy in -half..=half {
                        let yy = y as isize + dy;
                        if yy < 0 || yy >= input.height as isize {
                            continue;
                        }
                        for dx in -half..=half {
                            let xx = x as isize + dx;
                            if xx < 0 || xx >= input.width as isize {
                                continue;
                            }
                            best = best.max(input.get(c, yy as usize, xx as usize));
                        }
                    }
                    out.set(channel_offset + c, y, x, best);
                }
            }
        }
        channel_offset += input.channels;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_map_is_unchanged() {
        let mut input = FeatureMap::new(2, 7, 7);
        input.data.fill(3.5);
        let out = spp_pool(&input, &[3, 5]).unwrap();
        assert_eq!(out.channels, 6);
        assert_eq!((out.height, out.width), (7, 7));
        assert!(out.data.iter().all(|&v| v == 3.5));
    }

    #[test]
    fn single_peak_spreads_over_window() {
        let mut input = FeatureMap::new(1, 3, 3);
        input.set(0, 1, 1, 9.0);
        let out = spp_pool(&input, &[3]).unwrap();
        // pooled channel: every cell's 3x3 window reaches the center peak
        for y in 0..3 {
            for x in 0..3 {
                assert_eq!(out.get(1, y, x), 9.0);
            }
        }
        // pass-through channel untouched
        assert_eq!(out.get(0, 0, 0), 0.0);
        assert_eq!(out.get(0, 1, 1), 9.0);
    }

    #[test]
    fn darknet_kernel_triple_shape() {
        let input = FeatureMap::new(4, 19, 19);
        let out = spp_pool(&input, &[5, 9, 13]).unwrap();
        assert_eq!(out.channels, 16);
        assert_eq!((out.height, out.width), (19, 19));
    }

    #[test]
    fn even_kernel_rejected() {
        let input = FeatureMap::new(1, 5, 5);
        assert!(spp_pool(&input, &[4]).is_err());
    }

    #[test]
    fn oversized_kernel_rejected() {
        let input = FeatureMap::new(1, 5, 5);
        assert!(spp_pool(&input, &[7]).is_err());
    }

    #[test]
    fn pooled_output_dominates_input_pointwise() {
        let mut input = FeatureMap::new(1, 6, 7);
        for (i, v) in input.data.iter_mut().enumerate() {
            *v = ((i * 31) % 17) as f32 - 8.0;
        }
        let out = spp_pool(&input, &[3]).unwrap();
        for y in 0..6 {
            for x in 0..7 {
                assert!(out.get(1, y, x) >= input.get(0, y, x));
            }
        }
    }
}
