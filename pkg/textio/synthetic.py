"""
Synthetic - Templated sentiment corpus with known word-label signal

Class-indicative adjectives come in synonym clusters whose members are
drawn with skewed frequencies, so a classifier sees the head word of each
cluster often and its synonyms rarely. That gap is what word-substitution
attacks exploit and what embedding augmentation is meant to close.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

from numerics.errors import ArgumentError
from numerics.rng import Rng
from .dataset import write_jsonl

logger = logging.getLogger(__name__)

POSITIVE_CLUSTERS: Tuple[Tuple[str, ...], ...] = (
    ("good", "fine", "decent", "solid"),
    ("great", "superb", "terrific", "splendid"),
    ("excellent", "outstanding", "exceptional", "stellar"),
    ("enjoyable", "pleasant", "delightful", "charming"),
    ("beautiful", "lovely", "gorgeous", "stunning"),
    ("funny", "hilarious", "witty", "amusing"),
    ("clever", "smart", "brilliant", "ingenious"),
    ("moving", "touching", "heartfelt", "poignant"),
    ("exciting", "thrilling", "gripping", "riveting"),
    ("fresh", "original", "inventive", "imaginative"),
    ("warm", "tender", "gentle", "sweet"),
    ("memorable", "remarkable", "striking", "impressive"),
)

NEGATIVE_CLUSTERS: Tuple[Tuple[str, ...], ...] = (
    ("bad", "poor", "weak", "shoddy"),
    ("terrible", "awful", "dreadful", "horrid"),
    ("boring", "dull", "tedious", "monotonous"),
    ("ugly", "hideous", "unsightly", "grotesque"),
    ("stupid", "dumb", "silly", "inane"),
    ("messy", "sloppy", "clumsy", "careless"),
    ("annoying", "irritating", "grating", "tiresome"),
    ("painful", "unbearable", "excruciating", "agonizing"),
    ("predictable", "formulaic", "stale", "derivative"),
    ("cold", "lifeless", "flat", "hollow"),
    ("forgettable", "mediocre", "bland", "unremarkable"),
    ("pointless", "aimless", "empty", "shallow"),
)

NEUTRAL_CLUSTERS: Tuple[Tuple[str, ...], ...] = (
    ("movie", "film", "picture", "feature"),
    ("story", "plot", "narrative", "tale"),
    ("acting", "cast", "performances", "ensemble"),
    ("script", "dialogue", "writing", "screenplay"),
    ("director", "filmmaker", "auteur", "helmer"),
    ("music", "score", "soundtrack", "songs"),
    ("ending", "finale", "climax", "conclusion"),
    ("scenes", "sequences", "moments", "episodes"),
    ("characters", "roles", "figures", "personas"),
    ("visuals", "imagery", "cinematography", "photography"),
    ("audience", "viewers", "crowd", "public"),
    ("sequel", "remake", "adaptation", "reboot"),
)

INTENSIFIER_CLUSTERS: Tuple[Tuple[str, ...], ...] = (
    ("very", "really", "truly", "quite"),
    ("simply", "just", "utterly", "totally"),
    ("overall", "altogether", "ultimately", "basically"),
)

VERB_CLUSTERS: Tuple[Tuple[str, ...], ...] = (
    ("seemed", "appeared", "looked", "felt"),
    ("thought", "found", "considered", "judged"),
)

# Head word first; synonyms get progressively rarer.
MEMBER_WEIGHTS = (0.55, 0.25, 0.13, 0.07)

SINGLE_TEMPLATES: Tuple[str, ...] = (
    "the {noun} was {int} {adj}",
    "this {noun} is {adj} and {adj2}",
    "i {verb2} the {noun} {int} {adj}",
    "{overall} the {noun} {verb} {adj}",
    "a {int} {adj} {noun} with {adj2} {noun2}",
    "the {noun} {verb} {adj} and the {noun2} was {adj2}",
    "{int} {adj} {noun}",
    "what a {adj} {noun}",
)


@dataclass
class SyntheticSpec:
    """
    Corpus generation settings

    Args:
        train_size, dev_size, test_size: Number of examples per split
        task: 'single' (sentiment) or 'pair' (polarity agreement of two sentences)
        member_weights: Sampling weights of cluster members, head word first
    """
    train_size: int = 8000
    dev_size: int = 1000
    test_size: int = 1000
    task: str = "single"
    member_weights: Tuple[float, ...] = MEMBER_WEIGHTS

    def validate(self) -> None:
        for name in ("train_size", "dev_size", "test_size"):
            if getattr(self, name) < 1:
                raise ArgumentError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.task not in ("single", "pair"):
            raise ArgumentError(f"task must be 'single' or 'pair', got {self.task!r}")
        if len(self.member_weights) != 4 or min(self.member_weights) <= 0:
            raise ArgumentError("member_weights needs four positive weights")


def all_clusters() -> List[Tuple[str, ...]]:
    return list(POSITIVE_CLUSTERS + NEGATIVE_CLUSTERS + NEUTRAL_CLUSTERS
                + INTENSIFIER_CLUSTERS + VERB_CLUSTERS)


def class_words(label: int) -> List[str]:
    """Every class-indicative word for a sentiment label (1 positive, 0 negative)"""
    clusters = POSITIVE_CLUSTERS if label == 1 else NEGATIVE_CLUSTERS
    return [w for cluster in clusters for w in cluster]


class _SentenceSampler:
    """Draws template sentences from one Rng stream"""

    def __init__(self, rng: Rng, weights: Sequence[float]):
        self.rng = rng
        self.weights = [w / sum(weights) for w in weights]

    def _pick(self, items: Sequence):
        return items[int(self.rng.randint(1, len(items))[0])]

    def _word(self, clusters: Sequence[Tuple[str, ...]]) -> str:
        cluster = self._pick(clusters)
        member = int(self.rng.categorical([self.weights])[0])
        return cluster[member]

    def sentence(self, polarity: int) -> str:
        clusters = POSITIVE_CLUSTERS if polarity == 1 else NEGATIVE_CLUSTERS
        template = self._pick(SINGLE_TEMPLATES)
        fields = {
            "adj": self._word(clusters),
            "adj2": self._word(clusters),
            "noun": self._word(NEUTRAL_CLUSTERS),
            "noun2": self._word(NEUTRAL_CLUSTERS),
            "int": self._word(INTENSIFIER_CLUSTERS[:2]),
            "overall": self._word(INTENSIFIER_CLUSTERS[2:]),
            "verb": self._word(VERB_CLUSTERS[:1]),
            "verb2": self._word(VERB_CLUSTERS[1:]),
        }
        return template.format(**fields)


def _balanced_labels(rng: Rng, size: int) -> List[int]:
    labels = [i % 2 for i in range(size)]
    return [labels[i] for i in rng.permutation(size)]


def generate_split(rng: Rng, size: int, spec: SyntheticSpec) -> List[Dict]:
    """Records for one split in dataset schema"""
    sampler = _SentenceSampler(rng, spec.member_weights)
    records = []
    for label in _balanced_labels(rng, size):
        if spec.task == "single":
            records.append({"text": sampler.sentence(label), "label": label})
            continue
        first = int(rng.randint(1, 2)[0])
        second = first if label == 1 else 1 - first
        records.append({
            "text_a": sampler.sentence(first),
            "text_b": sampler.sentence(second),
            "label": label,
        })
    return records


def generate_synthetic_corpus(seed: int, spec: SyntheticSpec,
                              out_dir: Union[str, Path]) -> Dict[str, Path]:
    """
    Write train/dev/test JSONL files plus synonyms.json into ``out_dir``

    Returns:
        Mapping of 'train', 'dev', 'test', 'synonyms' to written paths
    """
    spec.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    streams = Rng(seed).split(3)
    paths: Dict[str, Path] = {}
    for (split, size), rng in zip(
        (("train", spec.train_size), ("dev", spec.dev_size), ("test", spec.test_size)), streams
    ):
        paths[split] = out / f"{split}.jsonl"
        write_jsonl(paths[split], generate_split(rng, size, spec))
        logger.info("wrote %d %s examples to %s", size, split, paths[split])

    paths["synonyms"] = out / "synonyms.json"
    paths["synonyms"].write_text(
        json.dumps({"clusters": [list(c) for c in all_clusters()]}, indent=1) + "\n",
        encoding="utf-8",
    )
    return paths


def load_synonyms(path: Union[str, Path]) -> Dict[str, List[str]]:
    """word -> other members of its cluster"""
    clusters = json.loads(Path(path).read_text(encoding="utf-8"))["clusters"]
    table: Dict[str, List[str]] = {}
    for cluster in clusters:
        for word in cluster:
            table[word] = [w for w in cluster if w != word]
    return table


def class_balance(records: Sequence[Dict]) -> Dict[int, float]:
    """Fraction of records per label"""
    counts: Dict[int, int] = {}
    for record in records:
        counts[record["label"]] = counts.get(record["label"], 0) + 1
    return {label: counts[label] / len(records) for label in sorted(counts)}
