// Wire protocol: one JSON object per line, matching the gateway's framing
// exactly. Requests serialize as {"id":N,"kind":"...",<payload keys sorted>}
// with compact separators so a transcript of UI traffic is byte-comparable
// with a headless script run of the same actions.

export const KINDS = [
  "RESERVE",
  "LOGIN",
  "LOGOUT",
  "DRAW_PATH",
  "CLEAR_PATH",
  "SET_SPEED",
  "RUN",
  "STOP",
  "VOICE",
  "ROUTE_REPORT",
  "STATUS",
  "TICK",
  "START_MATCH",
  "DECLARE_WINNER",
] as const;

export type Kind = (typeof KINDS)[number];

export type Payload = Record<string, unknown>;

export interface Reply {
  id: number;
  ok: boolean;
  error?: string;
  message?: string;
  result?: Record<string, unknown>;
}

export class ProtocolError extends Error {}

export function encodeRequest(id: number, kind: Kind, payload: Payload = {}): string {
  if (!Number.isInteger(id)) throw new ProtocolError("id must be an integer");
  const frame: Record<string, unknown> = { id, kind };
  for (const key of Object.keys(payload).sort()) {
    frame[key] = payload[key];
  }
  return JSON.stringify(frame);
}

export function decodeReply(line: string): Reply {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new ProtocolError("reply is not valid JSON");
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ProtocolError("reply must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  if (!Number.isInteger(obj.id)) throw new ProtocolError("reply id must be an integer");
  if (typeof obj.ok !== "boolean") throw new ProtocolError("reply ok must be a boolean");
  const reply: Reply = { id: obj.id as number, ok: obj.ok };
  if (obj.error !== undefined) {
    if (typeof obj.error !== "string") throw new ProtocolError("error must be a string");
    reply.error = obj.error;
  }
  if (obj.message !== undefined) {
    if (typeof obj.message !== "string") throw new ProtocolError("message must be a string");
    reply.message = obj.message;
  }
  if (obj.result !== undefined) {
    if (typeof obj.result !== "object" || obj.result === null || Array.isArray(obj.result)) {
      throw new ProtocolError("result must be an object");
    }
    reply.result = obj.result as Record<string, unknown>;
  }
  return reply; // unknown extra fields are dropped, same as the server side
}
