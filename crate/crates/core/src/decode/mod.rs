//! Detection-head postprocessing: grid/anchor decode, SPP max pooling,
//! confidence filtering, and greedy NMS.

mod layer;
mod nms;
mod spp;
mod tensor_io;

pub use layer::{decode_layer, BoxSpace, Detection, FeatureMap, YoloLayerSpec};
pub use nms::nms_greedy;
pub use spp::spp_pool;
pub use tensor_io::{read_tensor_file, write_tensor_file, TensorHeader, TENSOR_MAGIC};
