// UI session state: what the widgets are allowed to do, what the banners
// say, and a transcript of every frame exchanged with the gateway.
//
// The session never mutates lab state locally — every visible change is a
// gateway reply or a TICK snapshot. That is what makes a UI session
// transcript directly comparable with a headless script run.

import { encodeRequest, decodeReply, Kind, Payload, Reply } from "./protocol.js";
import { CanvasStroke, MappedStroke, mapStroke } from "./stroke.js";

/** Minimal line-oriented socket; adapts a browser WebSocket or a test fake. */
export interface LineSocket {
  send(line: string): void;
  onLine(cb: (line: string) => void): void;
  onClose(cb: () => void): void;
  close(): void;
}

export function wsLineSocket(ws: {
  send(data: string): void;
  close(): void;
  addEventListener(type: string, cb: (ev: any) => void): void;
}): LineSocket {
  return {
    send: (line) => ws.send(line),
    onLine: (cb) => ws.addEventListener("message", (ev: any) => cb(String(ev.data))),
    onClose: (cb) => ws.addEventListener("close", () => cb()),
    close: () => ws.close(),
  };
}

export type Privilege =
  | "SINGLE"
  | "COACH"
  | "USER"
  | "HIGH"
  | "MIDDLE"
  | "LOW"
  | "MASTER"
  | "SLAVE"
  | "PEER"
  | "PARENT"
  | "CHILD";

const DRIVER_KINDS: Kind[] = [
  "DRAW_PATH",
  "CLEAR_PATH",
  "SET_SPEED",
  "RUN",
  "STOP",
  "VOICE",
  "TICK",
];
const WATCH_KINDS: Kind[] = ["ROUTE_REPORT", "STATUS"];
const MATCH_KINDS: Kind[] = ["START_MATCH", "DECLARE_WINNER"];

/** Which request kinds each privilege may issue from the UI. */
export function allowedKinds(privilege: Privilege | null): Set<Kind> {
  if (privilege === null) return new Set<Kind>(["RESERVE", "LOGIN"]);
  const kinds = new Set<Kind>(["LOGOUT", ...WATCH_KINDS]);
  if (privilege === "COACH") {
    for (const k of MATCH_KINDS) kinds.add(k);
    return kinds; // the coach referees; the competitors drive
  }
  if (privilege === "SLAVE") return kinds; // slaves follow the master's commands
  for (const k of DRIVER_KINDS) kinds.add(k);
  return kinds;
}

export interface Widgets {
  draw: boolean;
  clear: boolean;
  speed: boolean;
  run: boolean;
  stop: boolean;
  voice: boolean;
  pathFinder: boolean;
  startMatch: boolean;
  declareWinner: boolean;
}

export interface RobotSnapshot {
  x: number;
  y: number;
  heading: string;
  speed: number;
  interval_ms: number;
  running: boolean;
  complete: boolean;
  ticks: number;
  elapsed_ms: number;
}

export interface Banners {
  light: string | null;
  robot: string | null;
}

export const LIGHT_DOWN_BANNER =
  "Light control server is down — path drawing is unavailable. Robot controls still work.";
export const ROBOT_DOWN_BANNER =
  "Robot control server is down — speed, run, stop and voice are unavailable. Path drawing still works.";

const LIGHT_OWNED = new Set<Kind>(["DRAW_PATH", "CLEAR_PATH"]);
const ROBOT_OWNED = new Set<Kind>(["SET_SPEED", "RUN", "STOP", "VOICE", "ROUTE_REPORT", "TICK"]);

export class UiSession {
  user: string | null = null;
  privilege: Privilege | null = null;
  sessionId: number | null = null;
  connected = true;

  banners: Banners = { light: null, robot: null };
  /** last dialog/notice text shown to the user (limit complaints, truncation, ...) */
  notice: string | null = null;

  robots: Record<string, RobotSnapshot> = {};
  routeTable: [number, number][] | null = null;

  private transcript: string[] = [];
  private nextId = 1;
  private pending: { id: number; resolve: (r: Reply) => void }[] = [];

  constructor(private socket: LineSocket, opts: { seed?: number } = {}) {
    if (opts.seed !== undefined) {
      // Python-style spacing, so transcripts line up with headless runs.
      this.transcript.push(`{"event": "header", "seed": ${opts.seed}}`);
    }
    socket.onLine((line) => this.receive(line));
    socket.onClose(() => {
      this.connected = false; // stale-connection indicator
    });
  }

  transcriptLines(): string[] {
    return [...this.transcript];
  }

  transcriptText(): string {
    return this.transcript.length ? this.transcript.join("\n") + "\n" : "";
  }

  widgets(): Widgets {
    const kinds = allowedKinds(this.privilege);
    return {
      draw: kinds.has("DRAW_PATH"),
      clear: kinds.has("CLEAR_PATH"),
      speed: kinds.has("SET_SPEED"),
      run: kinds.has("RUN"),
      stop: kinds.has("STOP"),
      voice: kinds.has("VOICE"),
      pathFinder: kinds.has("ROUTE_REPORT"),
      startMatch: kinds.has("START_MATCH"),
      declareWinner: kinds.has("DECLARE_WINNER"),
    };
  }

  request(kind: Kind, payload: Payload = {}): Promise<Reply> {
    const id = this.nextId++;
    const line = encodeRequest(id, kind, payload);
    this.transcript.push('{"event":"request","data":' + line + "}");
    const promise = new Promise<Reply>((resolve) => this.pending.push({ id, resolve }));
    this.socket.send(line);
    return promise.then((reply) => this.absorb(kind, reply));
  }

  private receive(line: string) {
    this.transcript.push('{"event":"reply","data":' + line + "}");
    const reply = decodeReply(line);
    const idx = this.pending.findIndex((p) => p.id === reply.id);
    if (idx >= 0) {
      const [p] = this.pending.splice(idx, 1);
      p.resolve(reply);
    }
  }

  /** Fold a reply into banners/notice/telemetry, then hand it back. */
  private absorb(kind: Kind, reply: Reply): Reply {
    if (!reply.ok) {
      if (reply.error === "LIGHT_SERVER_DOWN") {
        this.banners.light = LIGHT_DOWN_BANNER;
      } else if (reply.error === "ROBOT_SERVER_DOWN") {
        this.banners.robot = ROBOT_DOWN_BANNER;
      } else {
        this.notice = reply.message ?? reply.error ?? "request failed";
      }
      return reply;
    }
    if (LIGHT_OWNED.has(kind)) this.banners.light = null;
    if (ROBOT_OWNED.has(kind)) this.banners.robot = null;

    const result = reply.result ?? {};
    if (kind === "STATUS") {
      this.banners.light = result.light_up ? null : LIGHT_DOWN_BANNER;
      this.banners.robot = result.robot_up ? null : ROBOT_DOWN_BANNER;
    } else if (kind === "LOGIN") {
      this.user = String(result.user);
      this.privilege = result.privilege as Privilege;
      this.sessionId = Number(result.session);
    } else if (kind === "LOGOUT") {
      this.user = null;
      this.privilege = null;
      this.sessionId = null;
    } else if (kind === "TICK") {
      const robots = result.robots as Record<string, RobotSnapshot> | undefined;
      if (robots) this.robots = robots;
    } else if (kind === "ROUTE_REPORT") {
      this.routeTable = (result.waypoints as [number, number][]) ?? [];
    } else if (kind === "VOICE") {
      const text = String(result.reply ?? "");
      if (text) this.notice = text; // the robot talks back
    }
    return reply;
  }

  // ---- widget actions -------------------------------------------------

  reserve(scenario: string, party: string[], start: number, duration: number): Promise<Reply> {
    return this.request("RESERVE", { scenario, party, start, duration });
  }

  login(session: number, code: string): Promise<Reply> {
    return this.request("LOGIN", { session, code });
  }

  logout(): Promise<Reply> {
    return this.request("LOGOUT", {});
  }

  /**
   * Map a stroke to grid waypoints and submit it. Over-long strokes are
   * trimmed to the cap client-side, with a visible notice — the gateway
   * would reject them outright.
   */
  submitPath(stroke: CanvasStroke): Promise<Reply> {
    const mapped: MappedStroke = mapStroke(stroke);
    if (mapped.truncated) {
      this.notice = `stroke trimmed to ${mapped.points.length} waypoints (${mapped.dropped} dropped)`;
    }
    return this.request("DRAW_PATH", { channel: mapped.channel, points: mapped.points });
  }

  clearPath(channel: string): Promise<Reply> {
    return this.request("CLEAR_PATH", { channel });
  }

  /**
   * The speed box accepts any integer: out-of-range values go to the server
   * on purpose, so its limit complaint comes back and is shown verbatim.
   */
  setSpeed(robot: string, value: number): Promise<Reply> {
    return this.request("SET_SPEED", { robot, value: Math.trunc(value) });
  }

  run(robot: string): Promise<Reply> {
    return this.request("RUN", { robot });
  }

  stop(robot: string): Promise<Reply> {
    return this.request("STOP", { robot });
  }

  voice(robot: string, word: string): Promise<Reply> {
    return this.request("VOICE", { robot, word });
  }

  /** Path-Finder button: fetch and remember the reached-waypoint table. */
  pathFinder(robot: string): Promise<Reply> {
    return this.request("ROUTE_REPORT", { robot });
  }

  tick(n = 1): Promise<Reply> {
    return this.request("TICK", { n });
  }

  status(): Promise<Reply> {
    return this.request("STATUS", {});
  }

  startMatch(): Promise<Reply> {
    return this.request("START_MATCH", {}); // session comes from the login
  }

  declareWinner(winner: string, loser: string): Promise<Reply> {
    return this.request("DECLARE_WINNER", { winner, loser });
  }

  close() {
    this.socket.close();
  }
}
