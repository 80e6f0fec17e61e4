"""Rubric prompts for turn-level dialog quality judging and parsing of the replies.

The templates are kept line for line, including their inconsistencies ("option" vs
"option:", "RUBIC"), because judges were calibrated on exactly this text.
"""

import logging
import re
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict

from ..core.models import RubricKind, Turn
from ..exceptions import UnparseableJudgment

logger = logging.getLogger(__name__)


class RubricQuestion(BaseModel):
    """A rubric kind with its canonical options, in prompt order."""

    model_config = ConfigDict(frozen=True)

    kind: RubricKind
    options: tuple[str, ...]
    letters: tuple[str, ...] = ()


RUBRICS: dict[RubricKind, RubricQuestion] = {
    RubricKind.INFO_SEEKING: RubricQuestion(kind=RubricKind.INFO_SEEKING, options=("Yes", "No")),
    RubricKind.RELEVANCE: RubricQuestion(
        kind=RubricKind.RELEVANCE, options=("Follows up", "Topic only", "Not relevant"), letters=("A", "B", "C")
    ),
    RubricKind.SPECIFICITY: RubricQuestion(kind=RubricKind.SPECIFICITY, options=("Very", "Somewhat", "Not at all")),
    RubricKind.ANSWEREDNESS: RubricQuestion(
        kind=RubricKind.ANSWEREDNESS, options=("Perfectly", "Sufficiently", "Incompletely", "Not at all")
    ),
}

_CONTEXT_LINES = ("CONVERSATION: {conversation}", "QUERY: {query}", "ANSWER: {answer}")

PROMPT_TEMPLATES: dict[RubricKind, str] = {
    RubricKind.INFO_SEEKING: "\n".join(
        (
            "Is the QUERY information-seeking based on RUBRIC? Output option only",
            "option:",
            "* Yes",
            "* No",
            "RUBRIC:",
            "* Yes. The user is looking to learn some information from the system. Note: Information-seeking "
            "queries don't have to be phrased as questions.",
            "* No. The query is unclear, difficult to understand or not seeking information. Note: Not all "
            'questions are information seeking, e.g. questions directed at the system ("how are you", "what do '
            'you think") or ones that are nonsensical in the context ("Brian, how is Jill doing?").',
            *_CONTEXT_LINES,
        )
    ),
    RubricKind.RELEVANCE: "\n".join(
        (
            "How is the QUERY relevant to a CONVERSATION based on RUBRIC? Output option only.",
            "option",
            "* A",
            "* B",
            "* C",
            "RUBRIC:",
            "* A. Follows up on a previous query or response. It is difficult to correctly understand the query "
            "without reading the conversation history.",
            "* B. It is difficult to correctly understand the query without reading the conversation history. "
            "Only related to the topic of the conversation. The query is topically similar to previous queries or "
            "responses, but can be understood without reading them.",
            "* C. Not relevant. The query doesn't appear to be relevant to the topic or a previous query or "
            "response. Rule of thumb: if you are surprised by a query, it is probably not relevant.",
            *_CONTEXT_LINES,
        )
    ),
    RubricKind.SPECIFICITY: "\n".join(
        (
            "How specific is the QUERY based on RUBIC? CONVERSATION is the history context. Only output option text.",
            "option",
            "* Very",
            "* Somewhat",
            "* Not at all",
            "RUBRIC:",
            '* Very. Only a specific answer would satisfy the user. Example: "Why did she make the news in 1999?" '
            "likely requires a very specific answer.",
            "* Somewhat. A variety of answers of a specific kind would satisfy the user. Example: While there are "
            'many possible answers to "What else does she do?", they are all likely to be a job or activity.',
            "* Not at all. Many topically different answers would satisfy the user. Example: "
            '"Tell me something interesting about her." can be answered in many different ways.',
            *_CONTEXT_LINES,
        )
    ),
    RubricKind.ANSWEREDNESS: "\n".join(
        (
            "How well does the response ANSWER the QUERY based on RUBRIC? CONVERSATION is history context. "
            "Only output option text.",
            "option:",
            "* Perfectly",
            "* Sufficiently",
            "* Incompletely",
            "* Not at all",
            "RUBRIC:",
            "* Perfectly. The response completely satisfies the user's information need.",
            "* Sufficiently. The response mostly answers the user's information need, though some additional "
            "information could be provided.",
            "* Incompletely. The response provides some information relevant to the user, but doesn't adequately "
            "answer the question.",
            "* Not at all. The response does not provide any relevant information for the user's query or is not "
            "intelligible.",
            *_CONTEXT_LINES,
        )
    ),
}

_PLACEHOLDER = re.compile(r"\{(conversation|query|answer)\}")


def render_conversation(conversation: Sequence[Turn]) -> str:
    lines: list[str] = []
    for turn in conversation:
        lines.append(f"Q: {turn.question}")
        lines.append(f"A: {turn.answer.text}")
    return "\n".join(lines)


def render_prompt(kind: RubricKind | str, conversation: Sequence[Turn], query: str, answer: str) -> str:
    """Instantiate the rubric's template for one turn.

    ``conversation`` holds only the turns before the one being judged. Substitution is
    a single pass, so braces inside the substituted text are left alone.
    """
    values = {"conversation": render_conversation(conversation), "query": query, "answer": answer}
    return _PLACEHOLDER.sub(lambda match: values[match.group(1)], PROMPT_TEMPLATES[RubricKind(kind)])


_BULLETS = "*-•"


def parse_judgment(kind: RubricKind | str, response_text: str) -> str:
    """Map a judge reply to one canonical option of the rubric.

    Tries, in order: the relevance letters A/B/C, an exact match, a case-insensitive
    match, then a unique whole-word occurrence of an option inside the reply.

    Raises:
        UnparseableJudgment: If no unique option matches
    """
    rubric = RUBRICS[RubricKind(kind)]
    text = response_text.strip().lstrip(_BULLETS).strip().rstrip(".").strip()

    if rubric.letters:
        letter = re.match(r"^\(?([A-Ca-c])\)?(?:[.:)\s]|$)", text)
        if letter:
            return rubric.options[rubric.letters.index(letter.group(1).upper())]

    if text in rubric.options:
        return text
    folded = text.casefold()
    for option in rubric.options:
        if option.casefold() == folded:
            return option

    found = [option for option in rubric.options if re.search(rf"\b{re.escape(option.casefold())}\b", folded)]
    if len(found) == 1:
        return found[0]

    logger.warning(f"Unparseable {rubric.kind} judgment: {response_text!r}")
    raise UnparseableJudgment(f"No unique {rubric.kind} option in response", response_text=response_text)
