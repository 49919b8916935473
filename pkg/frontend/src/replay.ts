// Trajectory recording and replay. Recordings hold the exact serialized
// action payload strings, so replay is byte-identical to what was sent.

export interface Recording {
  version: 1;
  tickHz: number;
  payloads: string[];
}

export class Recorder {
  private payloads: string[] = [];

  constructor(public tickHz: number) {}

  capture(payload: string): void {
    this.payloads.push(payload);
  }

  finish(): Recording {
    return { version: 1, tickHz: this.tickHz, payloads: [...this.payloads] };
  }

  get length(): number {
    return this.payloads.length;
  }
}

export function serializeRecording(rec: Recording): string {
  return JSON.stringify(rec);
}

export function parseRecording(text: string): Recording {
  const raw = JSON.parse(text) as Recording;
  if (raw.version !== 1 || !Array.isArray(raw.payloads)) {
    throw new Error("not a version-1 trajectory recording");
  }
  return raw;
}

/** Drive a replay at the recording's tick rate; returns a stop function. */
export function playRecording(
  rec: Recording,
  sendPayload: (payload: string) => void,
  onDone: () => void,
  setIntervalImpl: typeof setInterval = setInterval,
): () => void {
  let i = 0;
  const handle = setIntervalImpl(() => {
    if (i >= rec.payloads.length) {
      clearInterval(handle as Parameters<typeof clearInterval>[0]);
      onDone();
      return;
    }
    sendPayload(rec.payloads[i]);
    i += 1;
  }, 1000 / rec.tickHz);
  return () => clearInterval(handle as Parameters<typeof clearInterval>[0]);
}
