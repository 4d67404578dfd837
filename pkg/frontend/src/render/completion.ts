// Completion page: congratulation, next-concept suggestions, and the two
// question-id lists (never tried / not completed). Hovering an id reveals
// the question's prompt.

import { CompletionPayload } from "../api.js";
import { escapeHtml } from "./html.js";

function renderIdList(ids: number[], prompts: Record<string, string>, cls: string): string {
    const links = ids.map((id) => {
        const prompt = prompts[String(id)] ?? "";
        return (
            `<a href="#" class="question-link" data-question="${id}" ` +
            `title="${escapeHtml(prompt)}">${id}</a>`
        );
    });
    return `<span class="${cls}">${links.join(", ")}</span>`;
}

export function renderCompletion(payload: CompletionPayload): string {
    const concept = escapeHtml(payload.concept.toUpperCase());
    const header =
        `<h2>Congratulations! You completed the "${concept}" concept.</h2>` +
        `<p><button type="button" class="btn btn-another-concept">Try another concept</button> ` +
        `<button type="button" class="btn btn-random-exercise">Do another random exercise</button></p>`;

    const suggestions = payload.suggestions.length
        ? `<div class="suggestions"><h3>Suggested next concepts</h3>` +
          payload.suggestions
              .map(
                  (c) =>
                      `<a href="#" class="suggestion-link" data-concept="${escapeHtml(c)}">${escapeHtml(c)}</a>`,
              )
              .join(", ") +
          `</div>`
        : "";

    const hasLists = payload.never_tried.length || payload.incomplete.length;
    const lists = hasLists
        ? `<div class="question-lists">` +
          `<p>Questions you never tried: ${renderIdList(payload.never_tried, payload.question_prompts, "never-tried")}</p>` +
          `<p>Questions not completed yet: ${renderIdList(payload.incomplete, payload.question_prompts, "incomplete")}</p>` +
          `</div>`
        : "";

    return `<section class="completion">${header}${suggestions}${lists}</section>`;
}
