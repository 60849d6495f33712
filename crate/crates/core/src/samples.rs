//! Small hand-written example sets used by tests, benchmarks and docs.

use crate::synthesis::Example;

fn ex(cmd: &str, err: &str, fix: &str) -> Example {
    Example::parse(cmd, err, fix).expect("sample examples are well-formed")
}

/// Error printed by `javac` when given a class name instead of a file.
pub fn javac_class_error(name: &str) -> String {
    format!(
        "Class names, `{name}', are only accepted if annotation processing is explicitly requested"
    )
}

/// Error printed by `java` when given a source file instead of a class.
pub fn java_main_class_error(file: &str) -> String {
    format!("Could not find or load main class {file}")
}

/// `javac Name` -> `javac Name.java`, for each name.
pub fn javac_missing_extension(names: &[&str]) -> Vec<Example> {
    names
        .iter()
        .map(|n| {
            ex(
                &format!("javac {n}"),
                &javac_class_error(n),
                &format!("javac {n}.java"),
            )
        })
        .collect()
}

/// `java Name.java` -> `java Name`, for each name.
pub fn java_source_file(names: &[&str]) -> Vec<Example> {
    names
        .iter()
        .map(|n| {
            let file = format!("{n}.java");
            ex(
                &format!("java {file}"),
                &java_main_class_error(&file),
                &format!("java {n}"),
            )
        })
        .collect()
}

/// `java Run.java` and `java Meta.java`.
pub fn run_meta() -> Vec<Example> {
    java_source_file(&["Run", "Meta"])
}

/// Two examples whose inputs are all identical strings: every token of
/// `aaaa aaaa / aaaa aaaa -> aa` can explain the output.
pub fn uniform_pair() -> Vec<Example> {
    vec![
        ex("aaaa aaaa", "aaaa aaaa", "aa"),
        ex("bbbb bbbb", "bbbb bbbb", "bb"),
    ]
}

/// Six examples needing three rules: two `java` source-file fixes, two
/// `composer` typo fixes, and two `mv` fixes that create the directory first.
pub fn mixed_corpus() -> Vec<Example> {
    vec![
        ex(
            "java Run.java",
            "Could not find or load main class Run.java",
            "java Run",
        ),
        ex(
            "java Test.java",
            "Could not find or load main class Test.java",
            "java Test",
        ),
        ex(
            "composer pkg",
            "did you mean one of these? pkg1 pkg2",
            "composer pkg1",
        ),
        ex(
            "composer hptt",
            "did you mean one of these? http html",
            "composer http",
        ),
        ex(
            "mv photo.jpg Mary/summer12.jpg",
            "can't rename `photo.jpg': No such file or directory",
            "mkdir Mary && mv photo.jpg Mary/summer12.jpg",
        ),
        ex(
            "mv dec31.jpg Bob/family.jpg",
            "can't rename `dec31.jpg': No such file or directory",
            "mkdir Bob && mv dec31.jpg Bob/family.jpg",
        ),
    ]
}

/// `examples` with every token list repeated `times` times.
pub fn repeated(examples: &[Example], times: usize) -> Vec<Example> {
    use crate::dsl::TokenSeq;
    let rep = |ts: &TokenSeq| -> TokenSeq {
        std::iter::repeat_n(ts.tokens(), times)
            .flatten()
            .cloned()
            .collect()
    };
    examples
        .iter()
        .map(|e| Example {
            cmd: rep(&e.cmd),
            err: rep(&e.err),
            fix: rep(&e.fix),
        })
        .collect()
}
