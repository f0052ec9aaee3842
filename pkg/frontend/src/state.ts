/** Projection of server session documents into what the page shows.

The view is rebuilt from a fresh GET of the session after every change, so
every name, score and level on screen comes straight out of a server
response.  Nothing here computes or adjusts a number.
*/

import type { CandidateDoc, SessionDoc } from "./api.js";

export type Outcome = "rejected" | "accepted" | "pending";

export interface HistoryEntry {
  name: string;
  score: number;
  level: number | null;
  outcome: Outcome;
}

export interface SessionView {
  sessionId: string;
  state: "active" | "accepted" | "exhausted";
  mode: string;
  kind: string;
  label: string;
  route: number[];
  visitedLevels: number[];
  evaluations: number;
  candidate: CandidateDoc | null;
  accepted: CandidateDoc | null;
  history: HistoryEntry[];
  incomparable: string[];
}

function outcomeAt(doc: SessionDoc, index: number): Outcome {
  // every presented candidate except the last was rejected to move on
  if (index < doc.presented.length - 1) return "rejected";
  if (doc.state === "accepted") return "accepted";
  if (doc.state === "active") return "pending";
  return "rejected";
}

export function sessionView(doc: SessionDoc): SessionView {
  return {
    sessionId: doc.session_id,
    state: doc.state,
    mode: doc.mode,
    kind: doc.kind,
    label: doc.label,
    route: [...doc.route],
    visitedLevels: [...doc.visited_levels],
    evaluations: doc.evaluations,
    candidate: doc.candidate,
    accepted: doc.accepted,
    history: doc.presented.map((candidate, index) => ({
      name: candidate.name,
      score: candidate.score,
      level: candidate.level,
      outcome: outcomeAt(doc, index),
    })),
    incomparable: [...doc.incomparable],
  };
}
