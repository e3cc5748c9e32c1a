use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml")).expect("cbindgen.toml parses");
    let bindings = cbindgen::Builder::new().with_crate(&crate_dir).with_config(config).generate().expect("header generation");
    let out = PathBuf::from(std::env::var("OUT_DIR").unwrap()).join("ising_forge.h");
    bindings.write_to_file(&out);
    // Keep a checked-out copy next to the sources for C consumers.
    let include = crate_dir.join("include");
    std::fs::create_dir_all(&include).expect("include dir");
    bindings.write_to_file(include.join("ising_forge.h"));
}
