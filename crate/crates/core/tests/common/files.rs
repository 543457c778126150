//! `.cht` file discovery and the print/parse round trip.

use std::path::{Path, PathBuf};

use cohtt::syntax::{parse_module, parse_term, print_term, SurfaceTerm};

pub fn cht_files(dir: &Path) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cht"))
        .collect();
    out.sort();
    out
}

pub fn round_trip(file: &Path) -> usize {
    let src = std::fs::read_to_string(file).unwrap();
    let name = file.file_stem().unwrap().to_string_lossy();
    let module = parse_module(&name, &src).unwrap_or_else(|e| panic!("{}: {e}", file.display()));
    let mut terms = 0;
    for d in module.decls() {
        for t in std::iter::once(&d.ty).chain(&d.body) {
            let printed = print_term(t);
            let reparsed: SurfaceTerm = parse_term(&printed).unwrap_or_else(|e| {
                panic!(
                    "{}: `{}` reprints unparsably as {printed}: {e}",
                    file.display(),
                    d.name
                )
            });
            assert_eq!(
                &reparsed,
                t,
                "{}: `{}` changes under print/parse: {printed}",
                file.display(),
                d.name
            );
            assert_eq!(print_term(&reparsed), printed);
            terms += 1;
        }
    }
    terms
}

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}
