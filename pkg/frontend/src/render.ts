/**
 * Projection of queue items into displayable rows, kept free of DOM
 * state so the ordering contract is testable: the ranked rows come out
 * exactly as the service sent them, slot-numbered 1..9 in place.
 */

import { Item, ItemPayload, MappingPayload, MatchPayload } from "./api.js";

export interface RankingRow {
  /** Key the verifier presses to pick this row ("1".."9", "" beyond 9). */
  slot: string;
  id: string;
  display: string;
  confidence: number;
  gloss: string;
  proposal: boolean;
}

/** Ranked candidate rows in API payload order, top proposal first. */
export function rankingRows(payload: ItemPayload): RankingRow[] {
  return payload.alternatives.map((alt, index) => ({
    slot: index < 9 ? String(index + 1) : "",
    id: alt.id,
    display: alt.display,
    confidence: alt.confidence,
    gloss: alt.gloss,
    proposal: index === 0,
  }));
}

export function itemTitle(item: Item): string {
  if (item.payload.kind === "mapping") {
    const payload = item.payload as MappingPayload;
    return `${payload.headword} (${payload.pos}, sense group ${payload.group})`;
  }
  const payload = item.payload as MatchPayload;
  return `${payload.left_display}  ↔  ${payload.right_display}`;
}

export function itemSubtitle(item: Item): string {
  if (item.payload.kind === "mapping") {
    const payload = item.payload as MappingPayload;
    const translations = payload.translations.join(", ");
    const field = payload.field_code ? `  [${payload.field_code}]` : "";
    return `${payload.stage}: ${translations}${field}`;
  }
  const payload = item.payload as MatchPayload;
  return `${payload.phase}: ${payload.left_gloss || "(no gloss)"}`;
}

function row(doc: Document, cls: string, text: string): HTMLElement {
  const el = doc.createElement("div");
  el.className = cls;
  el.textContent = text;
  return el;
}

/** Build the card for one item.  Rows are rendered strictly in the
 * order {@link rankingRows} yields them, which is the API order. */
export function renderItem(doc: Document, item: Item): HTMLElement {
  const card = doc.createElement("section");
  card.className = "item-card";
  card.appendChild(row(doc, "item-id", item.item_id));
  card.appendChild(row(doc, "item-title", itemTitle(item)));
  card.appendChild(row(doc, "item-subtitle", itemSubtitle(item)));

  const list = doc.createElement("ol");
  list.className = "ranking";
  for (const candidate of rankingRows(item.payload)) {
    const entry = doc.createElement("li");
    entry.className = candidate.proposal ? "candidate proposal" : "candidate";
    entry.dataset["id"] = candidate.id;
    entry.appendChild(row(doc, "slot", candidate.slot));
    entry.appendChild(row(doc, "display", candidate.display));
    entry.appendChild(
      row(doc, "confidence", candidate.confidence.toFixed(4)),
    );
    if (candidate.gloss) {
      entry.appendChild(row(doc, "gloss", candidate.gloss));
    }
    list.appendChild(entry);
  }
  card.appendChild(list);
  return card;
}

export function renderDrained(doc: Document): HTMLElement {
  const card = doc.createElement("section");
  card.className = "item-card drained";
  card.appendChild(row(doc, "item-title", "Queue drained"));
  card.appendChild(
    row(doc, "item-subtitle", "Every item has been judged. Good work."),
  );
  return card;
}

export function renderError(doc: Document, error: Error): HTMLElement {
  const card = doc.createElement("section");
  card.className = "item-card error";
  card.appendChild(row(doc, "item-title", "Request failed"));
  card.appendChild(row(doc, "item-subtitle", error.message));
  return card;
}
