use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let committed = crate_dir.join("include").join("ringcore.h");
    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml"))
        .expect("cbindgen.toml must parse");
    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            let out_dir = PathBuf::from(env::var("OUT_DIR").unwrap());
            bindings.write_to_file(out_dir.join("ringcore.h"));
            // refresh the committed header when the tree is writable
            let mut fresh = Vec::new();
            bindings.write(&mut fresh);
            let stale = std::fs::read(&committed).ok().as_deref() != Some(fresh.as_slice());
            if stale {
                if let Err(e) = std::fs::write(&committed, &fresh) {
                    println!("cargo:warning=could not refresh include/ringcore.h: {e}");
                }
            }
        }
        Err(e) => {
            println!("cargo:warning=cbindgen skipped: {e}");
        }
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
}
