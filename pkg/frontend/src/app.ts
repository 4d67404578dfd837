// Single-page wiring: concept graph on the left, exercise or completion view
// on the right. One mutating request at a time; buttons disable while a call
// is outstanding.

import { ApiClient, ApiError, ExercisePayload } from "./api.js";
import { renderCompletion } from "./render/completion.js";
import { renderExercise, renderFeedback } from "./render/exercise.js";
import { renderGraph } from "./render/graph.js";

interface AppState {
    concept: string | null;
    exercise: ExercisePayload | null;
    promptLanguage: "en" | "th";
}

export function startApp(root: HTMLElement, client: ApiClient): void {
    const state: AppState = { concept: null, exercise: null, promptLanguage: "en" };

    const graphPane = document.createElement("div");
    graphPane.className = "pane pane-graph";
    const mainPane = document.createElement("div");
    mainPane.className = "pane pane-main";
    const errorBar = document.createElement("div");
    errorBar.className = "error-bar";
    root.append(errorBar, graphPane, mainPane);

    function showError(err: unknown): void {
        errorBar.textContent =
            err instanceof ApiError ? `${err.body.code}: ${err.body.message}` : String(err);
        errorBar.classList.add("visible");
        setTimeout(() => errorBar.classList.remove("visible"), 5000);
    }

    async function refreshGraph(): Promise<void> {
        graphPane.innerHTML = renderGraph(await client.concepts());
        graphPane.querySelectorAll<HTMLButtonElement>(".concept-node").forEach((btn) =>
            btn.addEventListener("click", () => {
                void selectConcept(btn.dataset.concept!);
            }),
        );
    }

    function setBusy(busy: boolean): void {
        mainPane.querySelectorAll("button").forEach((b) => (b.disabled = busy));
    }

    async function guarded<T>(work: () => Promise<T>): Promise<T | undefined> {
        setBusy(true);
        try {
            return await work();
        } catch (err) {
            showError(err);
            return undefined;
        } finally {
            setBusy(false);
        }
    }

    async function selectConcept(conceptId: string): Promise<void> {
        await guarded(async () => {
            state.concept = conceptId;
            const result = await client.selectConcept(conceptId);
            if (result.pretest_required) {
                // pretest answers come from running the learner's code
                // upstream; the minimal client submits an empty sheet and
                // starts at the base level
                await client.submitPretest(conceptId, []);
            }
            await assignNext();
        });
    }

    async function assignNext(questionId?: number): Promise<void> {
        if (!state.concept) return;
        const view = await client.nextExercise(state.concept, questionId);
        state.exercise = view;
        if (view.completed || !view.question) {
            await showCompletion();
            return;
        }
        renderMain();
    }

    async function showCompletion(): Promise<void> {
        if (!state.concept) return;
        const payload = await client.completion(state.concept);
        mainPane.innerHTML = renderCompletion(payload);
        mainPane
            .querySelector(".btn-another-concept")
            ?.addEventListener("click", () => void refreshGraph());
        mainPane
            .querySelector(".btn-random-exercise")
            ?.addEventListener("click", () => void guarded(() => assignNext()));
        mainPane.querySelectorAll<HTMLAnchorElement>(".question-link").forEach((a) =>
            a.addEventListener("click", (ev) => {
                ev.preventDefault();
                void guarded(() => assignNext(Number(a.dataset.question)));
            }),
        );
        mainPane.querySelectorAll<HTMLAnchorElement>(".suggestion-link").forEach((a) =>
            a.addEventListener("click", (ev) => {
                ev.preventDefault();
                void selectConcept(a.dataset.concept!);
            }),
        );
    }

    function renderMain(): void {
        if (!state.exercise) return;
        const editor = mainPane.querySelector<HTMLTextAreaElement>(".editor");
        mainPane.innerHTML = renderExercise(state.exercise, editor?.value ?? "", state.promptLanguage);
        wireExercise();
    }

    function wireExercise(): void {
        const view = state.exercise;
        if (!view?.question) return;
        const qid = view.question.id;
        const editor = mainPane.querySelector<HTMLTextAreaElement>(".editor")!;
        const terminal = mainPane.querySelector<HTMLPreElement>(".terminal")!;

        mainPane.querySelectorAll<HTMLButtonElement>(".prompt-toggle button").forEach((btn) =>
            btn.addEventListener("click", () => {
                state.promptLanguage = btn.dataset.lang as "en" | "th";
                renderMain();
            }),
        );
        mainPane.querySelector(".btn-run")?.addEventListener("click", () => {
            // transcript-grading deployments run code upstream; the Run
            // button echoes the editor into the terminal as a dry run
            terminal.textContent = `$ ${view.question!.language} (local echo)\n${editor.value}`;
        });
        mainPane.querySelector(".btn-submit")?.addEventListener("click", () => {
            void guarded(async () => {
                const result = await client.submit(qid, editor.value);
                const feedbackHost = document.createElement("div");
                feedbackHost.innerHTML = renderFeedback(result.feedback);
                mainPane.append(feedbackHost);
                feedbackHost.querySelector(".btn-next")?.addEventListener("click", () => {
                    void guarded(() =>
                        result.concept_completed ? showCompletion() : assignNext(),
                    );
                });
                await refreshGraph();
            });
        });
        mainPane.querySelector(".btn-skip")?.addEventListener("click", () => {
            void guarded(async () => {
                const next = await client.skip(qid);
                state.exercise = next;
                if (next.completed || !next.question) {
                    await showCompletion();
                } else {
                    renderMain();
                }
            });
        });
    }

    void guarded(async () => {
        const opening = await client.startSession(false);
        await refreshGraph();
        if (opening.recommendation) {
            errorBar.textContent = `Suggested starting concept: ${opening.recommendation}`;
            errorBar.classList.add("visible", "info");
        }
    });
}

declare global {
    interface Window {
        startPracticeApp: (root: HTMLElement, baseUrl: string, learnerId: string) => void;
    }
}

if (typeof window !== "undefined") {
    window.startPracticeApp = (root, baseUrl, learnerId) =>
        startApp(root, new ApiClient(baseUrl, learnerId));
}
