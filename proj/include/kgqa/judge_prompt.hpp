#pragma once

#include <string_view>

namespace kgqa {

// Lenient judge prompt, version 1. The three {question} / {expected} /
// {predicted} slots are substituted verbatim by render_judge_prompt(); any
// change to this text is a new version. The substring stub judge parses the
// section markers below, so they are part of the versioned contract.
inline constexpr std::string_view kJudgePromptVersion = "v1";

inline constexpr std::string_view kJudgePromptTemplate =
    R"(You are a generous evaluator. Your goal is to determine whether the **predicted answer reflects the intended meaning** of the expected answer, even if the wording is different or the match is only partial.

- You should be lenient: allow paraphrases, synonyms, and generalizations.
- The predicted answer does not need to match all details, just the key idea.
- If the main meaning of the expected answer appears clearly or recognizably in the predicted answer-even in different words-consider it a match.
- Do not accept answers that are too vague or only weakly related.
- Ignore unrelated or repetitive sentences.

Query:
{question}

Expected answer (main idea to be reflected):
{expected}

Predicted Answer:
{predicted}

Does the predicted answer contain the **main idea or intent** of the expected answer in any form (direct, indirect, partial, or paraphrased)?

Respond only with "Yes" or "No".
)";

}  // namespace kgqa
