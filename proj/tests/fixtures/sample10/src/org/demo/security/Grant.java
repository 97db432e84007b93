package org.demo.security;

/** A grant of one permission to one principal. */
public class Grant {
    private final String principal;
    private final Permission permission;
    private final long expiresAt;

    public Grant(String principal, Permission permission, long expiresAt) {
        this.principal = principal;
        this.permission = permission;
        this.expiresAt = expiresAt;
    }

    public String getPrincipal() {
        return principal;
    }

    public Permission getPermission() {
        return permission;
    }

    public boolean isExpired(long now) {
        return expiresAt > 0 && now >= expiresAt;
    }

    public boolean covers(String principal, Permission permission) {
        return this.principal.equals(principal) && this.permission.implies(permission);
    }
}
