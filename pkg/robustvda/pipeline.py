"""
Pipeline - The subcommands: corpus, pretraining, fine-tuning, evaluation, attack, ablations

Artifacts of one run directory (``out_dir``):

    vocab.txt              vocabulary built from the training split
    mlm.ckpt               pretrained encoder (the frozen MLM)
    <name>.ckpt            fine-tuned classifier
    <name>.metrics.jsonl   one EpochMetrics object per epoch, then a summary object
    <name>.report.json     RobustnessReport
    ablation.json          combined reports from ``ablate``
    <stem>.config.resolved the exact configuration behind the artifact <stem>.*
                           (mlm, <name>, <name>.report, ablation, sweep-<param>)

The corpus directory (``data_dir``) gets a plain config.resolved from ``synth``.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from numerics.errors import VDAError
from numerics.rng import Rng
from attack import Victim, evaluate_robustness, export_adversarial, synonym_ids
from attack.report import RobustnessReport
from model import (
    Classifier,
    ClassifierHead,
    Encoder,
    load_checkpoint,
    mlm_loss,
    mlm_token_recovery,
    pretrain_mlm,
    save_checkpoint,
)
from textio import (
    Vocab,
    build_vocab,
    class_balance,
    generate_synthetic_corpus,
    load_jsonl,
    load_synonyms,
    read_records,
    record_texts,
)
from textio.encoding import EncodedExample
from trainer import best_epoch, evaluate, train, write_summary
from .config import ConfigError, RunConfig

logger = logging.getLogger(__name__)

SPLITS = ("train", "dev", "test")

# Each ablation changes exactly these keys relative to full VDA.
ABLATIONS: Dict[str, Dict[str, object]] = {
    "vda-noeps": {"sigma": 0.0},
    "cevda": {"reg_loss": "ce_on_label"},
    "argmax": {"mode": "argmax"},
    "sample": {"mode": "sample"},
}


class MissingArtifactError(VDAError):
    """A required input file from an earlier stage does not exist"""


class OutputExistsError(VDAError):
    """Refusing to overwrite existing output"""


def _require(path: Path, what: str, hint: str) -> Path:
    if not path.exists():
        raise MissingArtifactError(f"missing {what}: {path} (run `robustvda {hint}` first)")
    return path


def seed_stream(cfg: RunConfig, index: int) -> Rng:
    """Fixed child stream of the run seed: 0 encoder init, 1 pretraining, 2 head init"""
    return Rng(cfg.seed).split(3)[index]


# ------------------------------------------------------------ artifacts

def vocab_path(cfg: RunConfig) -> Path:
    return cfg.out_path / "vocab.txt"


def mlm_path(cfg: RunConfig) -> Path:
    return cfg.out_path / "mlm.ckpt"


def model_path(cfg: RunConfig, name: str) -> Path:
    return cfg.out_path / f"{name}.ckpt"


def split_path(cfg: RunConfig, split: str) -> Path:
    return _require(cfg.data_path / f"{split}.jsonl", f"{split} split", "synth")


def load_vocab(cfg: RunConfig) -> Vocab:
    return Vocab.load(_require(vocab_path(cfg), "vocabulary", "pretrain"))


def load_split(cfg: RunConfig, vocab: Vocab, split: str) -> List[EncodedExample]:
    return load_jsonl(split_path(cfg, split), vocab, cfg.max_len, cfg.num_classes)


def load_mlm(cfg: RunConfig, vocab: Vocab) -> Encoder:
    path = _require(mlm_path(cfg), "MLM checkpoint", "pretrain")
    return load_checkpoint(path, vocab.fingerprint()).encoder


def load_classifier(cfg: RunConfig, vocab: Vocab, name: str) -> Classifier:
    path = _require(model_path(cfg, name), f"checkpoint for {name!r}", f"train --name {name}")
    return load_checkpoint(path, vocab.fingerprint()).classifier()


def load_attack_synonyms(cfg: RunConfig, vocab: Vocab):
    path = cfg.data_path / "synonyms.json"
    if not cfg.use_synonyms:
        return None
    if not path.exists():
        logger.warning("no synonyms file at %s; candidates are unrestricted", path)
        return None
    return synonym_ids(vocab, load_synonyms(path))


# ------------------------------------------------------------ run configuration

def resolve_train_config(cfg: RunConfig, vda: str = "on",
                         ablation: Optional[str] = None) -> Tuple[RunConfig, str]:
    """
    Apply --vda / --ablation on top of ``cfg``

    Returns:
        (resolved config, default run name)

    Raises:
        ConfigError: conflicting options
    """
    if vda not in ("on", "off"):
        raise ConfigError(f"--vda must be 'on' or 'off', got {vda!r}")
    if vda == "off":
        if ablation is not None:
            raise ConfigError(f"--ablation {ablation} needs --vda on")
        if "lambda" in cfg.explicit and cfg.lam > 0:
            raise ConfigError(f"lambda = {cfg.lam} conflicts with --vda off")
        return cfg.copy(lam=0.0), "baseline"

    if cfg.lam == 0:
        raise ConfigError("lambda = 0 with --vda on; use --vda off for the baseline")
    if ablation is None:
        return cfg.copy(), "vda"
    if ablation not in ABLATIONS:
        raise ConfigError(f"unknown ablation {ablation!r}; choose from {sorted(ABLATIONS)}")
    changes = ABLATIONS[ablation]
    for key, value in changes.items():
        if key in cfg.explicit and getattr(cfg, key) != value:
            raise ConfigError(f"{key} = {getattr(cfg, key)} conflicts with --ablation {ablation}")
    return cfg.copy(**changes), ablation


# ------------------------------------------------------------ shared stages

def fine_tune(cfg: RunConfig, name: str, extra_data: Sequence[str] = ()) -> Dict:
    """Fine-tune from the MLM checkpoint, save the best-dev model and its metrics"""
    vocab = load_vocab(cfg)
    f_mlm = load_mlm(cfg, vocab)
    train_set = load_split(cfg, vocab, "train")
    for path in extra_data:
        extra = load_jsonl(path, vocab, cfg.max_len, cfg.num_classes)
        logger.info("added %d examples from %s", len(extra), path)
        train_set = train_set + extra
    dev_set = load_split(cfg, vocab, "dev")
    test_set = load_split(cfg, vocab, "test")

    model = Classifier(f_mlm.clone(), ClassifierHead(f_mlm.config, seed_stream(cfg, 2)))
    hook = None
    if cfg.epoch_attack_sample > 0:
        synonyms = load_attack_synonyms(cfg, vocab)
        attack_cfg = cfg.attack_config(synonyms, sample_size=cfg.epoch_attack_sample)
        attack_cfg.show_progress = False

        def hook(current: Classifier, epoch: int) -> float:
            return evaluate_robustness(Victim(current), f_mlm, dev_set, attack_cfg).att_acc

    metrics_path = cfg.out_path / f"{name}.metrics.jsonl"
    model, history = train(model, f_mlm, train_set, dev_set, cfg.train_config(), metrics_path, hook)
    test_acc = evaluate(model, test_set)
    summary = write_summary(metrics_path, history, test_acc)
    save_checkpoint(model_path(cfg, name), model.encoder, model.head, vocab.fingerprint(),
                    step=best_epoch(history).epoch)
    cfg.write_resolved(cfg.out_path, name)
    summary["name"] = name
    return summary


def attack_classifier(cfg: RunConfig, model: Classifier, f_mlm: Encoder, vocab: Vocab,
                      examples: Sequence[EncodedExample],
                      sample_size: Optional[int] = None) -> RobustnessReport:
    attack_cfg = cfg.attack_config(load_attack_synonyms(cfg, vocab), sample_size)
    return evaluate_robustness(Victim(model), f_mlm, examples, attack_cfg)


def train_and_attack(cfg: RunConfig, name: str) -> Dict:
    """One full fine-tune plus test-set attack; used by ablations and sweeps"""
    summary = fine_tune(cfg, name)
    vocab = load_vocab(cfg)
    report = attack_classifier(cfg, load_classifier(cfg, vocab, name), load_mlm(cfg, vocab),
                               vocab, load_split(cfg, vocab, "test"))
    report.save(cfg.out_path / f"{name}.report.json")
    return {"summary": summary, "report": report.to_dict()}


# ------------------------------------------------------------ subcommands

def cmd_synth(cfg: RunConfig, force: bool = False) -> Dict[str, Path]:
    out = cfg.data_path
    existing = [out / f"{s}.jsonl" for s in SPLITS if (out / f"{s}.jsonl").exists()]
    if existing and not force:
        raise OutputExistsError(f"{out} already holds a corpus; pass --force to overwrite")
    paths = generate_synthetic_corpus(cfg.seed, cfg.synthetic_spec(), out)
    cfg.write_resolved(out)
    for split in SPLITS:
        balance = class_balance(read_records(paths[split]))
        shares = ", ".join(f"{label}: {share:.3f}" for label, share in balance.items())
        print(f"{split}: {paths[split]} ({shares})")
    print(f"synonyms: {paths['synonyms']}")
    return paths


def cmd_pretrain(cfg: RunConfig) -> Path:
    cfg.out_path.mkdir(parents=True, exist_ok=True)
    vocab = build_vocab(record_texts(read_records(split_path(cfg, "train"))), cfg.vocab_max_size)
    vocab.save(vocab_path(cfg))
    train_set = load_split(cfg, vocab, "train")
    dev_set = load_split(cfg, vocab, "dev")

    encoder = Encoder(cfg.model_config(len(vocab)), seed_stream(cfg, 0))
    losses = pretrain_mlm(encoder, train_set, cfg.pretrain_steps, seed_stream(cfg, 1), cfg.mask_prob,
                          cfg.pretrain_batch_size, cfg.pretrain_lr, show_progress=cfg.show_progress)
    save_checkpoint(mlm_path(cfg), encoder, None, vocab.fingerprint(), step=len(losses))
    cfg.write_resolved(cfg.out_path, "mlm")

    print(f"vocabulary: {len(vocab)} tokens -> {vocab_path(cfg)}")
    print(f"dev masked-token loss: {mlm_loss(encoder, dev_set, seed=cfg.seed):.4f}")
    print(f"dev unmasked token recovery: {mlm_token_recovery(encoder, dev_set):.4f}")
    print(f"checkpoint: {mlm_path(cfg)}")
    return mlm_path(cfg)


def cmd_train(cfg: RunConfig, vda: str = "on", ablation: Optional[str] = None,
              extra_data: Sequence[str] = (), name: Optional[str] = None) -> Dict:
    resolved, default_name = resolve_train_config(cfg, vda, ablation)
    name = name or default_name
    resolved.out_path.mkdir(parents=True, exist_ok=True)
    summary = fine_tune(resolved, name, extra_data)
    print(f"{name}: best epoch {summary['best_epoch']}, dev acc {summary['best_dev_accuracy']:.4f}, "
          f"test acc {summary['test_accuracy']:.4f}")
    print(f"checkpoint: {model_path(resolved, name)}")
    return summary


def cmd_eval(cfg: RunConfig, name: str, split: str = "test") -> float:
    vocab = load_vocab(cfg)
    accuracy = evaluate(load_classifier(cfg, vocab, name), load_split(cfg, vocab, split))
    print(f"{name} {split} accuracy: {accuracy:.4f}")
    return accuracy


def cmd_attack(cfg: RunConfig, name: str, split: str = "test",
               export: Optional[str] = None) -> RobustnessReport:
    vocab = load_vocab(cfg)
    report = attack_classifier(cfg, load_classifier(cfg, vocab, name), load_mlm(cfg, vocab),
                               vocab, load_split(cfg, vocab, split))
    suffix = "" if split == "test" else f".{split}"
    report_path = cfg.out_path / f"{name}{suffix}.report.json"
    report.save(report_path)
    cfg.write_resolved(cfg.out_path, f"{name}{suffix}.report")
    print(json.dumps(report.to_dict(), indent=2))
    print(f"report: {report_path}")
    if export is not None:
        count = export_adversarial(report.results, vocab, export)
        print(f"exported {count} adversarial examples to {export}")
    return report


def cmd_ablate(cfg: RunConfig) -> Dict[str, Dict]:
    """Full VDA plus every ablation, each trained and attacked on the test split"""
    cfg.out_path.mkdir(parents=True, exist_ok=True)
    outcomes: Dict[str, Dict] = {}
    for ablation in (None,) + tuple(ABLATIONS):
        resolved, name = resolve_train_config(cfg, "on", ablation)
        outcomes[name] = train_and_attack(resolved, name)
        report = outcomes[name]["report"]
        print(f"{name}: ori acc {report['ori_acc']:.4f}, att acc {report['att_acc']:.4f}, "
              f"queries {report['avg_queries']:.1f}, perturb {report['avg_perturb_pct']:.1f}%")
    path = cfg.out_path / "ablation.json"
    path.write_text(json.dumps(outcomes, indent=2) + "\n", encoding="utf-8")
    cfg.write_resolved(cfg.out_path, "ablation")
    print(f"ablation report: {path}")
    return outcomes
