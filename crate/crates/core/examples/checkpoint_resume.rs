//! Stops a resolution after a fixed number of cells, then resumes it from
//! the checkpoint file.

use adams_e2::resolution::checkpoint::CheckpointWriter;
use adams_e2::resolution::{Limits, Resolution};

fn main() {
    let dir = std::env::temp_dir().join(format!("adams-e2-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("res.ckpt");
    let mut res = Resolution::new();
    let mut writer = CheckpointWriter::open(&path).unwrap();
    let limits = Limits { max_cells: Some(50), deadline: None };
    let err = res.extend_with(5, 24, limits, |rec| writer.append(rec)).unwrap_err();
    println!("interrupted: {err}");
    drop(writer);
    let mut resumed = Resolution::load_checkpoint(&path).unwrap();
    resumed.extend_resolution(5, 24).unwrap();
    println!("resumed; dim Ext^(4,18) = {}", resumed.ext_dim(4, 18).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}
