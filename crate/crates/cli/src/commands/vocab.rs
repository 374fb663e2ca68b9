use anyhow::Result;
use clap::Args;
use searchtrace::tokenizer::build_vocab;
use std::path::PathBuf;

#[derive(Args)]
pub struct VocabArgs {
    /// Game: countdown or sudoku.
    #[arg(long)]
    game: String,
    /// Output vocabulary file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: VocabArgs) -> Result<bool> {
    let game = super::parse_game(&args.game)?;
    let vocab = build_vocab(game);
    eprintln!(
        "vocab: game={game} size={} version={} hash={:016x}",
        vocab.len(),
        vocab.version,
        vocab.content_hash()
    );
    super::write_output(args.out.as_ref(), &vocab.to_file_string())?;
    Ok(true)
}
