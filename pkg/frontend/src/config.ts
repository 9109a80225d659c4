/** Where the backing API lives. Served same-origin by default; override
 * with a `window.API_BASE` global when the UI is hosted separately.
 */

declare global {
  interface Window {
    API_BASE?: string;
  }
}

export function apiBase(): string {
  if (typeof window !== "undefined" && window.API_BASE) {
    return window.API_BASE.replace(/\/$/, "");
  }
  return "";
}
