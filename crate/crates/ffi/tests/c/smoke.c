#include <stdio.h>
#include <string.h>

#include "hilbx.h"

int main(void) {
    uint64_t seed = 7;
    HilbxSessionKey *key = NULL;
    if (hilbx_key_generate(16, 0, &seed, &key) != HILBX_STATUS_OK) {
        fprintf(stderr, "keygen: %s\n", hilbx_last_error_message());
        return 1;
    }
    const char *msg = "attack at dawn";
    char *ct = NULL;
    if (hilbx_encrypt(key, (const uint8_t *)msg, strlen(msg), &ct) != HILBX_STATUS_OK) {
        return 2;
    }
    uint8_t *plain = NULL;
    size_t len = 0;
    if (hilbx_decrypt(key, ct, &plain, &len) != HILBX_STATUS_OK) {
        return 3;
    }
    int same = len == strlen(msg) && memcmp(plain, msg, len) == 0;
    hilbx_bytes_free(plain, len);
    hilbx_string_free(ct);
    hilbx_key_free(key);
    if (hilbx_decrypt(NULL, "", &plain, &len) != HILBX_STATUS_NULL_POINTER) {
        return 4;
    }
    puts(same ? "ok" : "mismatch");
    return same ? 0 : 5;
}
