/**
 * Single state store for the client.
 *
 * Everything the renderer draws comes from the last server broadcast;
 * there is no client-side physics or prediction.
 */

import { ServerMsg, StateMsg, TrialSummary } from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface ClientState {
  connection: ConnectionStatus;
  trialRunning: boolean;
  last: StateMsg | null;
  summaries: TrialSummary[];
  notices: string[];
}

export function initialState(): ClientState {
  return {
    connection: "connecting",
    trialRunning: false,
    last: null,
    summaries: [],
    notices: [],
  };
}

const MAX_NOTICES = 5;

export class Store {
  state: ClientState = initialState();
  private listeners: Array<(s: ClientState) => void> = [];

  subscribe(fn: (s: ClientState) => void): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private emit() {
    for (const fn of this.listeners) fn(this.state);
  }

  setConnection(status: ConnectionStatus) {
    this.state.connection = status;
    if (status !== "open") this.state.trialRunning = false;
    this.emit();
  }

  trialStarted() {
    this.state.trialRunning = true;
    this.state.last = null;
    this.emit();
  }

  apply(msg: ServerMsg) {
    switch (msg.type) {
      case "state":
        this.state.trialRunning = true;
        this.state.last = msg;
        break;
      case "trial_end":
        this.state.trialRunning = false;
        this.state.summaries.push(msg.summary);
        break;
      case "notice":
        this.state.notices.push(msg.message);
        if (this.state.notices.length > MAX_NOTICES) {
          this.state.notices.shift();
        }
        break;
    }
    this.emit();
  }
}
