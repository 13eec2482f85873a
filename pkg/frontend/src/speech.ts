/**
 * Browser speech capture wrapper. Uses the built-in speech recognition
 * API when the browser offers one and degrades to plain text entry
 * otherwise; the engine only ever receives text either way.
 */

export interface SpeechCapture {
  supported: boolean;
  start(onText: (text: string) => void, onEnd?: () => void): void;
  stop(): void;
}

interface RecognitionLike {
  lang: string;
  interimResults: boolean;
  continuous: boolean;
  onresult: ((event: any) => void) | null;
  onend: (() => void) | null;
  start(): void;
  stop(): void;
}

export function createSpeechCapture(host: any = globalThis): SpeechCapture {
  const Recognition =
    host.SpeechRecognition ?? host.webkitSpeechRecognition ?? null;
  if (Recognition === null) {
    return {
      supported: false,
      start() {
        /* text entry only */
      },
      stop() {},
    };
  }
  let active: RecognitionLike | null = null;
  return {
    supported: true,
    start(onText, onEnd) {
      const recognition: RecognitionLike = new Recognition();
      recognition.lang = 'en-US';
      recognition.interimResults = false;
      recognition.continuous = true;
      recognition.onresult = (event: any) => {
        for (let i = event.resultIndex; i < event.results.length; i += 1) {
          const result = event.results[i];
          if (result.isFinal && result[0]) {
            onText(String(result[0].transcript).trim());
          }
        }
      };
      recognition.onend = () => {
        active = null;
        onEnd?.();
      };
      active = recognition;
      recognition.start();
    },
    stop() {
      active?.stop();
      active = null;
    },
  };
}
