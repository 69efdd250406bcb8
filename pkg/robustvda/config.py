"""
RunConfig - Flat ``key = value`` run configuration covering every stage

File format (UTF-8):

    # comment
    seed = 3
    sigma = 0.01
    lambda = 1.0
    mode = mixture

Booleans are ``true``/``false``; numbers follow Python syntax; anything
else is a bare string. Unknown keys are rejected by name.
"""

import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from numerics.errors import VDAError
from attack.greedy import AttackConfig, SynonymIds
from model.config import ModelConfig
from textio.synthetic import SyntheticSpec
from trainer.config import TOY_LR, TrainConfig
from vda.config import DEFAULT_SIGMA, AugmentConfig

logger = logging.getLogger(__name__)

RESOLVED_NAME = "config.resolved"

# Keys whose file spelling is not a valid Python identifier.
KEY_ALIASES = {"lambda": "lam"}


class ConfigError(VDAError, ValueError):
    """Unknown key, unparsable value or conflicting options"""


@dataclass
class RunConfig:
    # paths and seeding
    data_dir: str = "data"
    out_dir: str = "runs"
    seed: int = 0
    show_progress: bool = False
    # synthetic corpus
    task: str = "single"
    train_size: int = 8000
    dev_size: int = 1000
    test_size: int = 1000
    # vocabulary and model
    vocab_max_size: int = 1000
    num_classes: int = 2
    layers: int = 2
    hidden_dim: int = 64
    heads: int = 2
    ffn_dim: int = 128
    max_len: int = 32
    init_std: float = 0.02
    # masked-token pretraining
    pretrain_steps: int = 2000
    pretrain_batch_size: int = 32
    pretrain_lr: float = 1e-3
    mask_prob: float = 0.15
    # fine-tuning
    lam: float = 1.0
    lr: float = TOY_LR
    epochs: int = 3
    batch_size: int = 32
    warmup_frac: float = 0.05
    decay: str = "constant"
    reg_loss: str = "sym_kl"
    per_draw_steps: bool = False
    # augmentation
    sigma: float = DEFAULT_SIGMA
    k: int = 1
    mode: str = "mixture"
    protect_specials: bool = True
    mixture_matrix: str = "classifier"
    temperature: float = 1.0
    # attack
    top_k_candidates: int = 8
    max_perturb_frac: float = 0.4
    sample_size: int = 1000
    use_synonyms: bool = False
    epoch_attack_sample: int = 100

    explicit: Set[str] = field(default_factory=set, repr=False, compare=False)

    # ------------------------------------------------------------ parsing

    @classmethod
    def keys(cls) -> List[str]:
        """File spellings of every key, in declaration order"""
        inverse = {v: k for k, v in KEY_ALIASES.items()}
        return [inverse.get(f.name, f.name) for f in fields(cls) if f.name != "explicit"]

    @staticmethod
    def _attr(key: str) -> str:
        return KEY_ALIASES.get(key, key)

    def set(self, key: str, raw: str) -> None:
        """Parse ``raw`` into the type of ``key`` and record it as explicitly set"""
        key = key.strip()
        if key not in self.keys():
            raise ConfigError(f"unknown config key {key!r}")
        attr = self._attr(key)
        default = getattr(type(self)(), attr)
        raw = raw.strip()
        try:
            if isinstance(default, bool):
                if raw.lower() not in ("true", "false"):
                    raise ValueError(raw)
                value: object = raw.lower() == "true"
            elif isinstance(default, int):
                value = int(raw)
            elif isinstance(default, float):
                value = float(raw)
            else:
                value = raw
        except ValueError:
            raise ConfigError(f"bad value for {key}: {raw!r}") from None
        setattr(self, attr, value)
        self.explicit.add(key)

    def update(self, pairs: Iterable[Tuple[str, str]]) -> "RunConfig":
        for key, raw in pairs:
            self.set(key, raw)
        return self

    @classmethod
    def from_text(cls, text: str, source: str = "<config>") -> "RunConfig":
        cfg = cls()
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{source}:{number}: expected 'key = value', got {line!r}")
            key, raw = line.split("=", 1)
            try:
                cfg.set(key, raw)
            except ConfigError as exc:
                raise ConfigError(f"{source}:{number}: {exc}") from None
        return cfg

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None) -> "RunConfig":
        if path is None:
            return cls()
        return cls.from_text(Path(path).read_text(encoding="utf-8"), str(path))

    @staticmethod
    def parse_override(item: str) -> Tuple[str, str]:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        return key.strip(), raw

    def copy(self, **changes) -> "RunConfig":
        other = type(self)()
        for key in self.keys():
            setattr(other, self._attr(key), getattr(self, self._attr(key)))
        other.explicit = set(self.explicit)
        for attr, value in changes.items():
            setattr(other, attr, value)
        return other

    # ------------------------------------------------------------ output

    def to_text(self) -> str:
        lines = []
        for key in self.keys():
            value = getattr(self, self._attr(key))
            if isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    def write_resolved(self, directory: Union[str, Path], stem: Optional[str] = None) -> Path:
        """Echo this config as ``<stem>.config.resolved`` (or ``config.resolved``) in ``directory``"""
        name = RESOLVED_NAME if stem is None else f"{stem}.{RESOLVED_NAME}"
        path = Path(directory) / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(), encoding="utf-8")
        return path

    @classmethod
    def describe(cls) -> str:
        """One 'key = default' line per key, for --help"""
        return cls().to_text()

    # ------------------------------------------------------------ module configs

    @property
    def data_path(self) -> Path:
        return Path(self.data_dir)

    @property
    def out_path(self) -> Path:
        return Path(self.out_dir)

    def synthetic_spec(self) -> SyntheticSpec:
        spec = SyntheticSpec(self.train_size, self.dev_size, self.test_size, self.task)
        self._checked(spec)
        return spec

    def model_config(self, vocab_size: int) -> ModelConfig:
        config = ModelConfig(vocab_size, self.num_classes, self.layers, self.hidden_dim,
                             self.heads, self.ffn_dim, self.max_len, self.init_std)
        return self._checked(config)

    def augment_config(self) -> AugmentConfig:
        try:
            aug = AugmentConfig(self.sigma, self.k, self.mode, self.protect_specials,
                                self.mixture_matrix, self.temperature)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self._checked(aug)

    def train_config(self) -> TrainConfig:
        if self.decay not in ("constant", "linear"):
            raise ConfigError(f"decay must be 'constant' or 'linear', got {self.decay!r}")
        try:
            cfg = TrainConfig(
                lam=self.lam, lr=self.lr, epochs=self.epochs, batch_size=self.batch_size,
                warmup_frac=self.warmup_frac, decay=self.decay, reg_loss=self.reg_loss,
                augment=self.augment_config(), per_draw_steps=self.per_draw_steps,
                seed=self.seed, show_progress=self.show_progress,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self._checked(cfg)

    def attack_config(self, synonyms: Optional[SynonymIds] = None,
                      sample_size: Optional[int] = None) -> AttackConfig:
        cfg = AttackConfig(
            top_k_candidates=self.top_k_candidates,
            max_perturb_frac=self.max_perturb_frac,
            sample_size=self.sample_size if sample_size is None else sample_size,
            seed=self.seed,
            synonyms=synonyms if self.use_synonyms else None,
            show_progress=self.show_progress,
        )
        return self._checked(cfg)

    @staticmethod
    def _checked(obj):
        try:
            obj.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return obj
