// DOM wiring for the lab page. All logic lives in session.ts/stroke.ts;
// this file only moves values between widgets and the UiSession.

import { UiSession, wsLineSocket } from "./session.js";
import { CanvasPoint, Channel, GRID_H, GRID_W } from "./stroke.js";

const $ = <T extends HTMLElement>(id: string) => document.getElementById(id) as T;

const ws = new WebSocket(`ws://${location.host}/ws`);
const session = new UiSession(wsLineSocket(ws));

const canvas = $<HTMLCanvasElement>("field");
canvas.width = GRID_W;
canvas.height = GRID_H;
const ctx = canvas.getContext("2d")!;

let drawing = false;
let samples: CanvasPoint[] = [];

function channel(): Channel {
  return ($<HTMLSelectElement>("channel").value as Channel) ?? "RED";
}

canvas.addEventListener("mousedown", (ev) => {
  drawing = true;
  samples = [{ x: ev.offsetX, y: ev.offsetY }];
});
canvas.addEventListener("mousemove", (ev) => {
  if (!drawing) return;
  samples.push({ x: ev.offsetX, y: ev.offsetY });
  ctx.fillStyle = channel() === "RED" ? "#c33" : "#33c";
  ctx.fillRect(ev.offsetX, ev.offsetY, 2, 2);
});
canvas.addEventListener("mouseup", async () => {
  drawing = false;
  if (samples.length) await session.submitPath({ channel: channel(), points: samples });
  refresh();
});

$<HTMLButtonElement>("reserve").onclick = async () => {
  const party = $<HTMLInputElement>("party").value.split(",").map((s) => s.trim()).filter(Boolean);
  const reply = await session.reserve($<HTMLSelectElement>("scenario").value, party, 0, 60);
  $("pins").textContent = JSON.stringify(reply.result?.pins ?? reply.error, null, 1);
  refresh();
};

$<HTMLButtonElement>("login").onclick = async () => {
  await session.login(Number($<HTMLInputElement>("session").value), $<HTMLInputElement>("pin").value);
  refresh();
};

$<HTMLButtonElement>("set-speed").onclick = async () => {
  // integer entry only, but deliberately not range-limited: the server's
  // High/Low Speed complaints are part of the experience
  const value = parseInt($<HTMLInputElement>("speed").value, 10);
  if (!Number.isNaN(value)) await session.setSpeed(channel(), value);
  refresh();
};

$<HTMLButtonElement>("run").onclick = async () => {
  await session.run(channel());
  refresh();
};
$<HTMLButtonElement>("stop").onclick = async () => {
  await session.stop(channel());
  refresh();
};
$<HTMLButtonElement>("say").onclick = async () => {
  await session.voice(channel(), $<HTMLInputElement>("voice").value);
  refresh();
};

$<HTMLButtonElement>("path-finder").onclick = async () => {
  await session.pathFinder(channel());
  const rows = (session.routeTable ?? []).map(([x, y], i) => `<tr><td>${i + 1}</td><td>${x}</td><td>${y}</td></tr>`);
  $("route-table").innerHTML = `<tr><th>#</th><th>x</th><th>y</th></tr>${rows.join("")}`;
  refresh();
};

$<HTMLButtonElement>("tick").onclick = async () => {
  await session.tick(10);
  paintRobots();
  refresh();
};

function paintRobots() {
  for (const [name, snap] of Object.entries(session.robots)) {
    ctx.fillStyle = name === "RED" ? "#f00" : "#00f";
    ctx.fillRect(snap.x - 3, snap.y - 3, 6, 6);
    const watch = name === "RED" ? $("stopwatch-red") : $("stopwatch-blue");
    watch.textContent = `${name}: ${snap.ticks} ticks / ${snap.elapsed_ms} ms ${snap.complete ? "(finished)" : ""}`;
  }
}

function refresh() {
  const w = session.widgets();
  $<HTMLButtonElement>("run").disabled = !w.run;
  $<HTMLButtonElement>("stop").disabled = !w.stop;
  $<HTMLButtonElement>("set-speed").disabled = !w.speed;
  $<HTMLButtonElement>("say").disabled = !w.voice;
  $<HTMLButtonElement>("path-finder").disabled = !w.pathFinder;
  canvas.style.pointerEvents = w.draw ? "auto" : "none";

  $("banner-light").textContent = session.banners.light ?? "";
  $("banner-robot").textContent = session.banners.robot ?? "";
  $("notice").textContent = session.notice ?? "";
  $("who").textContent = session.user ? `${session.user} (${session.privilege})` : "not logged in";
  $("link").textContent = session.connected ? "connected" : "connection lost";
}

refresh();
