/** Minimal JSON Schema checker covering the subset the service publishes
 * (object/string/integer/number/boolean/array types, properties, required,
 * anyOf, additionalProperties, numeric and length bounds, enum, null). */

export interface SchemaIssue {
  path: string;
  message: string;
}

type Schema = Record<string, unknown>;

export function validateAgainstSchema(value: unknown, schema: Schema): SchemaIssue[] {
  const issues: SchemaIssue[] = [];
  check(value, schema, "$", issues);
  return issues;
}

function typeOf(value: unknown): string {
  if (value === null) return "null";
  if (Array.isArray(value)) return "array";
  if (typeof value === "number") return Number.isInteger(value) ? "integer" : "number";
  return typeof value;
}

function check(value: unknown, schema: Schema, path: string, issues: SchemaIssue[]): void {
  const anyOf = schema["anyOf"] as Schema[] | undefined;
  if (anyOf) {
    const attempts = anyOf.map((sub) => {
      const subIssues: SchemaIssue[] = [];
      check(value, sub, path, subIssues);
      return subIssues;
    });
    if (!attempts.some((a) => a.length === 0)) {
      issues.push({ path, message: `matches no variant of anyOf` });
    }
    return;
  }

  const expected = schema["type"] as string | undefined;
  const actual = typeOf(value);
  if (expected) {
    const ok =
      expected === actual ||
      (expected === "number" && actual === "integer");
    if (!ok) {
      issues.push({ path, message: `expected ${expected}, got ${actual}` });
      return;
    }
  }

  const allowed = schema["enum"] as unknown[] | undefined;
  if (allowed && !allowed.some((v) => v === value)) {
    issues.push({ path, message: `value not in enum [${allowed.join(", ")}]` });
  }

  if (actual === "integer" || actual === "number") {
    const v = value as number;
    const min = schema["minimum"] as number | undefined;
    const max = schema["maximum"] as number | undefined;
    if (min !== undefined && v < min) issues.push({ path, message: `${v} < minimum ${min}` });
    if (max !== undefined && v > max) issues.push({ path, message: `${v} > maximum ${max}` });
  }

  if (actual === "string") {
    const s = value as string;
    const minLength = schema["minLength"] as number | undefined;
    const maxLength = schema["maxLength"] as number | undefined;
    if (minLength !== undefined && s.length < minLength)
      issues.push({ path, message: `length ${s.length} < minLength ${minLength}` });
    if (maxLength !== undefined && s.length > maxLength)
      issues.push({ path, message: `length ${s.length} > maxLength ${maxLength}` });
  }

  if (actual === "object") {
    const obj = value as Record<string, unknown>;
    const required = (schema["required"] as string[] | undefined) ?? [];
    for (const key of required) {
      if (!(key in obj)) issues.push({ path: `${path}.${key}`, message: "required property missing" });
    }
    const properties = (schema["properties"] as Record<string, Schema> | undefined) ?? {};
    const additional = schema["additionalProperties"] as Schema | boolean | undefined;
    for (const [key, item] of Object.entries(obj)) {
      if (key in properties) {
        check(item, properties[key], `${path}.${key}`, issues);
      } else if (typeof additional === "object") {
        check(item, additional, `${path}.${key}`, issues);
      } else if (additional === false) {
        issues.push({ path: `${path}.${key}`, message: "unexpected property" });
      }
    }
  }

  if (actual === "array") {
    const items = schema["items"] as Schema | undefined;
    if (items) {
      (value as unknown[]).forEach((item, i) => check(item, items, `${path}[${i}]`, issues));
    }
  }
}
