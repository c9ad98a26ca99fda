// Reads and writes the profile file format. The emitter matches the scoring
// CLI's serializer byte for byte (weights in D-number order, same quoting
// rule), so an exported file validates and round-trips cleanly.

export interface ProfileFile {
  name: string;
  description: string;
  weights: Record<string, number>;
}

const NEEDS_QUOTES = /[:#{}\[\]"'\n]/;

function scalar(text: string): string {
  if (NEEDS_QUOTES.test(text) || text !== text.trim()) {
    return '"' + text.replace(/\\/g, "\\\\").replace(/"/g, '\\"') + '"';
  }
  return text;
}

function dimNumber(dim: string): number {
  return Number(dim.slice(1));
}

export function emitProfile(profile: ProfileFile): string {
  const lines = [
    `name: ${profile.name}`,
    `description: ${scalar(profile.description)}`,
    "weights:",
  ];
  const dims = Object.keys(profile.weights).sort((a, b) => dimNumber(a) - dimNumber(b));
  for (const dim of dims) {
    lines.push(`  ${dim}: ${profile.weights[dim]}`);
  }
  return lines.join("\n") + "\n";
}

function unquote(text: string): string {
  const trimmed = text.trim();
  if (trimmed.startsWith('"') && trimmed.endsWith('"') && trimmed.length >= 2) {
    return trimmed.slice(1, -1).replace(/\\"/g, '"').replace(/\\\\/g, "\\");
  }
  return trimmed;
}

export function parseProfile(text: string): ProfileFile {
  let name = "";
  let description = "";
  const weights: Record<string, number> = {};
  let inWeights = false;
  for (const raw of text.split("\n")) {
    if (!raw.trim() || raw.trim().startsWith("#")) continue;
    if (raw.startsWith("  ") && inWeights) {
      const sep = raw.indexOf(":");
      if (sep < 0) throw new Error(`bad weights line: ${raw}`);
      const dim = raw.slice(0, sep).trim();
      const value = Number(raw.slice(sep + 1).trim());
      if (!/^D\d+$/.test(dim) || !Number.isFinite(value)) {
        throw new Error(`bad weights line: ${raw}`);
      }
      weights[dim] = value;
      continue;
    }
    inWeights = false;
    const sep = raw.indexOf(":");
    if (sep < 0) throw new Error(`bad profile line: ${raw}`);
    const key = raw.slice(0, sep).trim();
    const value = raw.slice(sep + 1);
    if (key === "name") name = unquote(value);
    else if (key === "description") description = unquote(value);
    else if (key === "weights") inWeights = true;
    else throw new Error(`unknown profile key: ${key}`);
  }
  if (!name) throw new Error("profile file has no name");
  return { name, description, weights };
}
