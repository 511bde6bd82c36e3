"""Domain-knowledge probe: ask factual questions, grade by the first number."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..engine.state import _data_path
from ..planner import LLMPlanner, Planner, PlannerConfig, PlannerError

_NUMBER = re.compile(r"[-+]?\d[\d,]*(?:\.\d+)?")


class QAError(RuntimeError):
    pass


@dataclass(frozen=True)
class Question:
    question: str
    answer: float
    game: str = ""
    source: str = ""

    # quack like a PromptDocument so any Planner can answer it
    @property
    def text(self) -> str:
        return self.question

    def messages(self) -> list[dict]:
        return [{"role": "user", "content": self.question}]


@dataclass
class QAItem:
    question: Question
    response: str
    extracted: float | None
    correct: bool


@dataclass
class QAResult:
    items: list[QAItem] = field(default_factory=list)

    @property
    def correct(self) -> int:
        return sum(i.correct for i in self.items)

    @property
    def accuracy(self) -> float:
        return self.correct / len(self.items) if self.items else 0.0

    def by_game(self) -> dict[str, float]:
        out = {}
        for game in sorted({i.question.game for i in self.items}):
            sub = [i for i in self.items if i.question.game == game]
            out[game] = sum(i.correct for i in sub) / len(sub)
        return out


def load_questions(path: str | Path | None = None) -> list[Question]:
    text = _data_path("qa.yaml").read_text() if path is None else Path(path).read_text()
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict) or not isinstance(doc.get("questions"), list):
        raise QAError("question file needs a 'questions' list")
    out = []
    for i, q in enumerate(doc["questions"]):
        try:
            out.append(Question(str(q["question"]), float(q["answer"]), str(q.get("game", "")),
                                str(q.get("source", ""))))
        except (KeyError, TypeError, ValueError) as exc:
            raise QAError(f"question #{i}: {exc!r}") from None
    if not out:
        raise QAError("question file is empty")
    return out


def first_number(text: str) -> float | None:
    m = _NUMBER.search(text or "")
    if m is None:
        return None
    try:
        return float(m.group(0).replace(",", ""))
    except ValueError:
        return None


def grade(q: Question, response: str) -> QAItem:
    value = first_number(response)
    return QAItem(q, response, value, value is not None and value == q.answer)


def qa_probe(cfg: PlannerConfig, question_file: str | Path | None = None,
             planner: Planner | None = None) -> QAResult:
    """Ask every question verbatim; the i-th question is sent with tick ``i``."""
    questions = load_questions(question_file)
    if planner is None:
        try:
            planner = LLMPlanner(cfg)
        except PlannerError as exc:
            raise QAError(str(exc)) from None
    result = QAResult()
    for i, q in enumerate(questions):
        try:
            response = planner.respond(q, i)
        except PlannerError as exc:
            raise QAError(f"question {i + 1}: {exc}") from None
        result.items.append(grade(q, response))
    return result
