/**
 * Bootstraps the review page: wires DOM targets, the document keydown
 * listener, and the session loop.  Query parameters select the queue
 * (`?queue=review`) and the verifier identity (`&verifier=alice`).
 */

import { Client } from "./api.js";
import { renderDrained, renderError, renderItem } from "./render.js";
import { Session } from "./session.js";
import { formatStats } from "./stats.js";

function pickVerifier(params: URLSearchParams): string {
  const given = params.get("verifier");
  if (given) {
    return given;
  }
  const stored = window.localStorage.getItem("lexmerge-verifier");
  if (stored) {
    return stored;
  }
  const generated = `verifier-${Math.random().toString(36).slice(2, 8)}`;
  window.localStorage.setItem("lexmerge-verifier", generated);
  return generated;
}

function main(): void {
  const params = new URLSearchParams(window.location.search);
  const queueId = params.get("queue") ?? "default";
  const verifier = pickVerifier(params);

  const app = document.getElementById("app");
  const statsBox = document.getElementById("stats");
  const queueBox = document.getElementById("queue-name");
  const verifierBox = document.getElementById("verifier-name");
  if (!app || !statsBox || !queueBox || !verifierBox) {
    throw new Error("review page skeleton is missing its mount points");
  }
  queueBox.textContent = queueId;
  verifierBox.textContent = verifier;

  const client = new Client({ verifier });
  const session = new Session(client, queueId, {
    onItem: (item) => {
      app.replaceChildren(renderItem(document, item));
    },
    onDrained: () => {
      app.replaceChildren(renderDrained(document));
    },
    onStats: (stats) => {
      statsBox.textContent = formatStats(stats);
    },
    onError: (error) => {
      app.replaceChildren(renderError(document, error));
    },
  });

  document.addEventListener("keydown", (event) => {
    if (event.altKey || event.ctrlKey || event.metaKey) {
      return;
    }
    void session.handleKey(event.key);
  });

  void session.start();
}

main();
