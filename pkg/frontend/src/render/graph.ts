// Concept-graph view: a tree of concept nodes colored by progress status.
// Orange marks in-progress concepts, green completed ones; everything else
// stays neutral. Colors derive solely from the /concepts payload.

import { ConceptNode, ConceptsPayload } from "../api.js";
import { escapeHtml } from "./html.js";

export interface GraphNodeView {
    id: string;
    label: string;
    statusClass: string;
    children: GraphNodeView[];
}

const STATUS_CLASSES: Record<string, string> = {
    complete: "status-complete",
    in_progress: "status-in-progress",
    not_started: "status-not-started",
};

export function buildGraphView(payload: ConceptsPayload): GraphNodeView[] {
    const byParent = new Map<string | null, ConceptNode[]>();
    for (const node of payload.concepts) {
        const key = node.parent ?? null;
        const bucket = byParent.get(key) ?? [];
        bucket.push(node);
        byParent.set(key, bucket);
    }
    const toView = (node: ConceptNode): GraphNodeView => ({
        id: node.id,
        label: node.display_name,
        statusClass: STATUS_CLASSES[node.status] ?? "status-not-started",
        children: (byParent.get(node.id) ?? []).map(toView),
    });
    return (byParent.get(null) ?? []).map(toView);
}

function renderNode(node: GraphNodeView): string {
    const children = node.children.length
        ? `<ul>${node.children.map(renderNode).join("")}</ul>`
        : "";
    return (
        `<li><button type="button" class="concept-node ${node.statusClass}" ` +
        `data-concept="${escapeHtml(node.id)}">${escapeHtml(node.label)}</button>${children}</li>`
    );
}

export function renderGraph(payload: ConceptsPayload): string {
    const roots = buildGraphView(payload);
    if (!roots.length) {
        return `<div class="concept-graph concept-graph-empty"></div>`;
    }
    const legend =
        `<div class="legend">` +
        `<span class="legend-item status-in-progress">in progress</span>` +
        `<span class="legend-item status-complete">complete</span>` +
        `</div>`;
    return `<div class="concept-graph"><ul>${roots.map(renderNode).join("")}</ul>${legend}</div>`;
}
