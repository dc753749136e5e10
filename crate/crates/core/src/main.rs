fn main() {
    std::process::exit(fusion_torsion::cli::run(std::env::args_os()));
}
