// Exercise page: level badge (adaptive mode only), prompt with language
// toggle, hint chips (selected concept highlighted, parent shown in
// brackets), the code editor, and per-case feedback blocks.

import { ExercisePayload, FeedbackDoc, Hint } from "../api.js";
import { escapeHtml } from "./html.js";

function renderHint(hint: Hint): string {
    const cls = hint.emphasized ? "hint-chip hint-selected" : "hint-chip hint-related";
    const parent = hint.parent_display_name
        ? ` <span class="hint-parent">(${escapeHtml(hint.parent_display_name)})</span>`
        : "";
    return `<span class="${cls}">${escapeHtml(hint.display_name)}${parent}</span>`;
}

export function renderPrompt(payload: ExercisePayload, language: "en" | "th" = "en"): string {
    const question = payload.question;
    if (!question) {
        return "";
    }
    const toggle = question.prompt_th
        ? `<div class="prompt-toggle">` +
          `<button type="button" data-lang="en" class="${language === "en" ? "active" : ""}">EN</button>` +
          `<button type="button" data-lang="th" class="${language === "th" ? "active" : ""}">TH</button>` +
          `</div>`
        : "";
    const text = language === "th" && question.prompt_th ? question.prompt_th : question.prompt_en;
    return `${toggle}<p class="prompt-text">${escapeHtml(text)}</p>`;
}

export function renderExercise(
    payload: ExercisePayload,
    editorText = "",
    promptLanguage: "en" | "th" = "en",
): string {
    if (payload.completed || !payload.question) {
        return `<section class="exercise exercise-done" data-concept="${escapeHtml(
            payload.concept ?? "",
        )}"><p>No exercise assigned; the concept is complete.</p></section>`;
    }
    const question = payload.question;
    // the level stays hidden whenever the payload does not carry one
    const badge = payload.level
        ? `<span class="level-badge level-${escapeHtml(payload.level)}">${escapeHtml(payload.level)}</span>`
        : "";
    const hints = question.hints.map(renderHint).join(" ");
    return (
        `<section class="exercise" data-question="${question.id}">` +
        `<header>${badge}<span class="question-id">#${question.id}</span>` +
        `<span class="language-tag">${escapeHtml(question.language)}</span></header>` +
        `<div class="prompt">${renderPrompt(payload, promptLanguage)}</div>` +
        `<div class="hints">${hints}</div>` +
        `<div class="workbench">` +
        `<textarea class="editor" spellcheck="false">${escapeHtml(editorText)}</textarea>` +
        `<pre class="terminal" aria-label="program output"></pre>` +
        `</div>` +
        `<footer class="actions">` +
        `<button type="button" class="btn btn-primary btn-run">&#9654; Run</button>` +
        `<button type="button" class="btn btn-submit">Submit code</button>` +
        `<button type="button" class="btn btn-skip">Try other practice</button>` +
        `</footer>` +
        `</section>`
    );
}

function renderLines(lines: string[] | null | undefined): string {
    if (lines == null) {
        return `<pre class="io-block io-null">null</pre>`;
    }
    return `<pre class="io-block">${escapeHtml(lines.join("\n"))}</pre>`;
}

export function renderFeedback(doc: FeedbackDoc): string {
    const blocks = doc.cases.map((kase, index) => {
        const n = index + 1;
        const ok = kase.verdict === "Correct";
        const cls = ok ? "case-correct" : "case-incorrect";
        let details = "";
        if (!ok) {
            details =
                `<div class="case-details">` +
                `<div class="case-input"><h4>Input</h4>${renderLines(kase.input)}</div>` +
                `<div class="case-expected"><h4>Expected output</h4>${renderLines(kase.expected)}</div>` +
                `<div class="case-actual"><h4>Your output</h4>${renderLines(kase.actual)}</div>` +
                `</div>`;
        }
        return (
            `<div class="case-block ${cls}">` +
            `<div class="case-verdict">Test Case-${n}: ${kase.verdict}</div>` +
            details +
            `</div>`
        );
    });
    const next = `<button type="button" class="btn btn-next">Click to the next exercise</button>`;
    return `<section class="feedback">${blocks.join("")}${next}</section>`;
}
