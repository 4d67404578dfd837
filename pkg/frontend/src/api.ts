// Typed client for the practice-engine HTTP API. All UI state derives from
// these payloads; the client never invents fields the server did not send.

export type ConceptStatus = "not_started" | "in_progress" | "complete";

export interface ConceptNode {
    id: string;
    display_name: string;
    parent: string | null;
    status: ConceptStatus;
}

export interface ConceptsPayload {
    learner_id: string;
    language: string;
    concepts: ConceptNode[];
}

export interface Hint {
    concept_id: string;
    display_name: string;
    emphasized: boolean;
    parent_id?: string;
    parent_display_name?: string;
}

export interface QuestionPayload {
    id: number;
    language: string;
    prompt_en: string;
    prompt_th?: string;
    hints: Hint[];
    test_case_count: number;
}

export interface ExercisePayload {
    learner_id: string;
    mode: string;
    recommendation?: string;
    concept?: string;
    level?: string; // absent in random mode: never rendered there
    question?: QuestionPayload;
    progress: Record<string, string>;
    completed: boolean;
}

export interface FeedbackCase {
    verdict: "Correct" | "Incorrect";
    input?: string[];
    expected?: string[];
    actual?: string[] | null;
}

export interface FeedbackDoc {
    cases: FeedbackCase[];
    all_correct: boolean;
}

export interface SubmissionResponse {
    feedback: FeedbackDoc;
    transition: string;
    concept_completed: boolean;
}

export interface SelectResponse {
    concept: string;
    pretest_required: boolean;
    resume_level?: string;
}

export interface CompletionPayload {
    concept: string;
    suggestions: string[];
    never_tried: number[];
    incomplete: number[];
    question_prompts: Record<string, string>;
}

export interface ApiErrorBody {
    code: string;
    message: string;
}

export class ApiError extends Error {
    constructor(public status: number, public body: ApiErrorBody) {
        super(`${body.code}: ${body.message}`);
    }
}

export class ApiClient {
    private inFlight = false;

    constructor(private baseUrl: string, private learnerId: string) {}

    get mutationInFlight(): boolean {
        return this.inFlight;
    }

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const response = await fetch(this.baseUrl + path, {
            ...init,
            headers: {
                "Content-Type": "application/json",
                "X-Learner-Id": this.learnerId,
                ...(init?.headers ?? {}),
            },
        });
        const body = await response.json();
        if (!response.ok) {
            throw new ApiError(response.status, body as ApiErrorBody);
        }
        return body as T;
    }

    // mutations are serialized: at most one outstanding request per learner
    private async mutate<T>(path: string, payload: unknown): Promise<T> {
        if (this.inFlight) {
            throw new Error("a request is already in flight");
        }
        this.inFlight = true;
        try {
            return await this.request<T>(path, {
                method: "POST",
                body: JSON.stringify(payload),
            });
        } finally {
            this.inFlight = false;
        }
    }

    concepts(): Promise<ConceptsPayload> {
        return this.request(`/concepts?learner=${encodeURIComponent(this.learnerId)}`);
    }

    startSession(hasExperience: boolean): Promise<ExercisePayload> {
        return this.mutate("/session", {
            learner_id: this.learnerId,
            has_programming_experience: hasExperience,
        });
    }

    selectConcept(conceptId: string): Promise<SelectResponse> {
        return this.mutate(`/concepts/${encodeURIComponent(conceptId)}/select`, {});
    }

    submitPretest(conceptId: string, answers: unknown[]): Promise<{ level?: string }> {
        return this.mutate(`/concepts/${encodeURIComponent(conceptId)}/pretest`, { answers });
    }

    nextExercise(conceptId: string, questionId?: number): Promise<ExercisePayload> {
        const params = new URLSearchParams({ concept: conceptId });
        if (questionId !== undefined) {
            params.set("question_id", String(questionId));
        }
        return this.mutate(`/exercise/next?${params}`, {});
    }

    submit(questionId: number, source: string, outputs?: unknown[]): Promise<SubmissionResponse> {
        return this.mutate("/submission", {
            question_id: questionId,
            source,
            outputs,
            request_id: crypto.randomUUID(),
        });
    }

    skip(questionId: number): Promise<ExercisePayload> {
        return this.mutate("/skip", {
            question_id: questionId,
            request_id: crypto.randomUUID(),
        });
    }

    completion(conceptId: string): Promise<CompletionPayload> {
        return this.request(`/concepts/${encodeURIComponent(conceptId)}/completion`);
    }
}
