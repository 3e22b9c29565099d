use tilecoh::pipeline::{analyze, AnalysisOptions};
use tilecoh::report::AnalysisReport;
use tilecoh::substitution::parse_substitution;

fn main() {
    for path in std::env::args().skip(1) {
        let text = std::fs::read_to_string(&path).expect("readable input");
        let s = parse_substitution(&text).expect("valid substitution");
        let a = analyze(&s, &AnalysisOptions::default());
        print!("{}", AnalysisReport::from_analysis(&a).to_text());
        println!();
    }
}
