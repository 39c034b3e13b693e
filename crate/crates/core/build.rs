// Hashes the library sources so that cached results are tied to the exact
// code that produced them.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

fn collect(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in fs::read_dir(dir).expect("readable source dir") {
        let path = entry.expect("dir entry").path();
        if path.is_dir() {
            collect(&path, out);
        } else if path.extension().is_some_and(|e| e == "rs") {
            out.push(path);
        }
    }
}

fn main() {
    let mut files = Vec::new();
    collect(Path::new("src"), &mut files);
    files.sort();
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION"));
    for f in &files {
        h.update(f.to_string_lossy().replace('\\', "/"));
        h.update(fs::read(f).expect("readable source"));
    }
    println!("cargo:rustc-env=GW_CODE_HASH={}", &hex::encode(h.finalize())[..16]);
    println!("cargo:rerun-if-changed=src");
}
